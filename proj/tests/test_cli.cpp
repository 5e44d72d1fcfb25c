#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ooebp/cli.hpp"

using namespace ooebp;

namespace {

struct result {
  int code;
  std::string out;
  std::string err;
};

result call(std::vector<std::string> args) {
  args.insert(args.begin(), "ooebp_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(OOEBP_SAMPLES_DIR) + "/" + name; }

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST(Cli, PackPrintsValidPacking) {
  const result r = call({"pack", sample("three_halves.txt"), "--alg", "nf"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("cost 2"), std::string::npos);
  const result c = call({"pack", sample("half_then_one.txt"), "--alg", "class"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("cost 1"), std::string::npos);
}

TEST(Cli, ErrorKindsAndCodes) {
  result r = call({});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error[usage]: ", 0), 0u);

  r = call({"pack", sample("three_halves.txt"), "--alg", "ff"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error[usage]: ", 0), 0u);

  r = call({"pack", sample("bad_zero.txt"), "--alg", "nf"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error[parse]: ", 0), 0u);
  EXPECT_NE(r.err.find("bad_zero.txt"), std::string::npos);

  r = call({"pack", sample("half_then_one.txt"), "--alg", "class-no-ones"});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(r.err.rfind("error[input]: ", 0), 0u);

  r = call({"opt", sample("random_n12_seed7.txt"), "--max-items", "5"});
  EXPECT_EQ(r.code, 5);
  EXPECT_EQ(r.err.rfind("error[limit]: ", 0), 0u);

  r = call({"pack", sample("no_such_file.txt"), "--alg", "nf"});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(r.err.rfind("error[input]: ", 0), 0u);

  r = call({"adversary", "--family", "nf_tight", "--N", "0"});
  EXPECT_EQ(r.code, 2);
  r = call({"adversary", "--family", "nope", "--N", "3"});
  EXPECT_EQ(r.code, 2);
  r = call({"aptas", sample("three_halves.txt"), "--eps", "half"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, AdversaryRoundTrip) {
  const std::string path = temp_path("ooebp_cli_nf_tight.txt");
  result r = call({"adversary", "--family", "nf_tight", "--N", "3", "-o", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_instance(path), gen_nf_tight(3));
  r = call({"pack", path, "--alg", "nf"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("cost 6"), std::string::npos);
  r = call({"opt", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("cost 4"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, RandomIsSeeded) {
  const result a = call({"random", "--n", "12", "--max-q", "10", "--seed", "7"});
  const result b = call({"random", "--n", "12", "--max-q", "10", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::istringstream in(a.out);
  EXPECT_EQ(read_instance(in).size(), 12u);
}

TEST(Cli, ReportFormats) {
  result r = call({"report", "--alg", "nf", "--family", "nf_tight", "--N", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("family,N,n,alg,alg_cost,opt,ratio"), std::string::npos);
  EXPECT_NE(r.out.find("nf_tight,50,200,nf,100,51,1.96078"), std::string::npos);
  r = call({"report", "--alg", "nf", "--family", "nf_tight", "--N", "2", "3", "--format", "json-lines"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  EXPECT_EQ(r.out.front(), '{');
}

TEST(Cli, AptasAndLowerBound) {
  result r = call({"aptas", sample("three_halves.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("cost 2"), std::string::npos);
  r = call({"lower-bound", "--N", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ratio 1.630483598"), std::string::npos);
}
