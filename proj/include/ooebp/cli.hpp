#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ooebp/adversary.hpp"
#include "ooebp/analysis.hpp"
#include "ooebp/aptas.hpp"
#include "ooebp/instance_io.hpp"
#include "ooebp/offline_exact.hpp"
#include "ooebp/online.hpp"
#include "ooebp/params.hpp"
#include "ooebp/random.hpp"

namespace ooebp::cli {

/// Error categories. Messages are written as "error[<category>]: <text>".
enum class error_kind { usage, parse, input, limit, internal };

inline const char* error_tag(error_kind k) {
  switch (k) {
    case error_kind::usage: return "usage";
    case error_kind::parse: return "parse";
    case error_kind::input: return "input";
    case error_kind::limit: return "limit";
    case error_kind::internal: return "internal";
  }
  return "internal";
}

inline int exit_code(error_kind k) {
  switch (k) {
    case error_kind::usage: return 2;
    case error_kind::parse: return 3;
    case error_kind::input: return 4;
    case error_kind::limit: return 5;
    case error_kind::internal: return 70;
  }
  return 70;
}

class cli_error : public std::runtime_error {
 public:
  cli_error(error_kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

struct run_config {
  std::string input;
  std::string output;
  std::string alg = "nf";
  std::string format = "text";
  std::optional<int> M;
  solver_limits limits;
};

/// Applies OOEBP_NODE_BUDGET when set.
inline void apply_env(solver_limits& limits) {
  if (const char* v = std::getenv("OOEBP_NODE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long b = std::strtoull(v, &end, 10);
    if (end == v || *end != '\0' || b == 0) throw cli_error(error_kind::usage, "OOEBP_NODE_BUDGET must be a positive integer");
    limits.node_budget = b;
  }
}

inline instance read_input(const std::string& path) {
  try {
    if (path == "-") return read_instance(std::cin);
    std::ifstream in(path);
    if (!in) throw cli_error(error_kind::input, "cannot open " + path);
    return read_instance(in);
  } catch (const parse_error& e) {
    throw cli_error(error_kind::parse, (path == "-" ? std::string("<stdin>") : path) + ": " + e.what());
  }
}

/// Writes to the output path, or to out when the path is empty.
template <typename F>
void with_output(const std::string& path, std::ostream& out, F&& f) {
  if (path.empty()) {
    f(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw cli_error(error_kind::input, "cannot write " + path);
  f(file);
  if (!file) throw cli_error(error_kind::input, "write failed: " + path);
}

inline std::string real_str(const real& x, int digits = 16) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

inline int cmd_pack(const run_config& cfg, std::ostream& out) {
  const instance inst = read_input(cfg.input);
  algorithm_id alg;
  try {
    alg = parse_algorithm(cfg.alg);
  } catch (const std::invalid_argument& e) {
    throw cli_error(error_kind::usage, e.what());
  }
  const int M = cfg.M.value_or(default_class_M(alg));
  packing p;
  try {
    p = run_algorithm(alg, inst, M);
  } catch (const unsupported_input& e) {
    throw cli_error(error_kind::input, e.what());
  }
  with_output(cfg.output, out, [&](std::ostream& o) { write_packing(o, p); });
  return 0;
}

inline int cmd_opt(const run_config& cfg, std::ostream& out) {
  const instance inst = read_input(cfg.input);
  try {
    const exact_result r = optimal_cost(inst, cfg.limits);
    with_output(cfg.output, out, [&](std::ostream& o) { write_packing(o, r.witness); });
  } catch (const instance_too_large& e) {
    throw cli_error(error_kind::limit, e.what());
  } catch (const budget_exceeded& e) {
    throw cli_error(error_kind::limit, e.what());
  }
  return 0;
}

inline int cmd_adversary(const family_spec& spec, const std::string& output, std::ostream& out) {
  instance inst;
  try {
    inst = generate(spec);
  } catch (const invalid_family_params& e) {
    throw cli_error(error_kind::usage, e.what());
  }
  with_output(output, out, [&](std::ostream& o) { write_instance(o, inst); });
  return 0;
}

inline int cmd_aptas(const run_config& cfg, const scheme_params& params, std::ostream& out) {
  const instance inst = read_input(cfg.input);
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw cli_error(error_kind::usage, e.what());
  }
  aptas_result r;
  try {
    r = run_aptas(inst, params);
  } catch (const configuration_cap_exceeded& e) {
    throw cli_error(error_kind::limit, e.what());
  }
  with_output(cfg.output, out, [&](std::ostream& o) {
    o << "certificate " << (inst.empty() ? std::string("-") : certificate_str(r.best_cert)) << "\n";
    write_packing(o, r.best);
  });
  return 0;
}

inline int cmd_report(const run_config& cfg, family_spec spec, const std::vector<std::int64_t>& Ns, opt_mode mode,
                      std::ostream& out) {
  algorithm_id alg;
  try {
    alg = parse_algorithm(cfg.alg);
  } catch (const std::invalid_argument& e) {
    throw cli_error(error_kind::usage, e.what());
  }
  std::vector<report_row> rows;
  try {
    rows = ratio_report(alg, spec, Ns, mode, cfg.M, cfg.limits);
  } catch (const invalid_family_params& e) {
    throw cli_error(error_kind::usage, e.what());
  } catch (const unsupported_input& e) {
    throw cli_error(error_kind::input, e.what());
  } catch (const instance_too_large& e) {
    throw cli_error(error_kind::limit, e.what());
  } catch (const budget_exceeded& e) {
    throw cli_error(error_kind::limit, e.what());
  }
  with_output(cfg.output, out, [&](std::ostream& o) {
    if (cfg.format == "json-lines") {
      for (const auto& r : rows) {
        char ratio[64];
        std::snprintf(ratio, sizeof ratio, "%.12Lf", r.ratio);
        o << "{\"family\":\"" << r.family << "\",\"N\":" << r.N << ",\"n\":" << r.n << ",\"alg\":\"" << r.alg
          << "\",\"alg_cost\":" << r.alg_cost << ",\"opt\":" << r.opt << ",\"ratio\":" << ratio << "}\n";
      }
    } else {
      o << report_header << "\n";
      for (const auto& r : rows) o << format_row(r) << "\n";
    }
  });
  return 0;
}

inline int cmd_verify_bounds(const std::string& variant, int grid, std::optional<int> M, std::ostream& out) {
  algorithm_variant v;
  class_params params;
  if (variant == "with-ones") {
    v = algorithm_variant::with_ones;
    params = default_params_with_ones(M.value_or(1000));
  } else if (variant == "no-ones") {
    v = algorithm_variant::no_ones;
    params = default_params_no_ones(M.value_or(100));
  } else {
    throw cli_error(error_kind::usage, "variant must be with-ones or no-ones");
  }
  bin_weight_result r;
  try {
    r = verify_bin_weight_bound(v, params, grid);
  } catch (const search_too_large& e) {
    throw cli_error(error_kind::limit, e.what());
  }
  out << "variant " << variant << "\n";
  out << "M " << params.M << "\n";
  out << "grid " << grid << "\n";
  out << "side " << (r.side == weight_variant::w_with_ones || r.side == weight_variant::w_no_ones ? "w" : "v") << "\n";
  out << "max_weight " << real_str(r.max_weight, 15) << "\n";
  out << "witness";
  for (const auto& s : r.witness) out << " " << s.str();
  out << "\n";
  if (params.R) out << "R " << real_str(*params.R, 15) << "\n";
  out << "nodes " << r.nodes << "\n";
  return 0;
}

inline int cmd_lower_bound(int N, bool no_ones, std::ostream& out) {
  lower_bound_report r;
  try {
    r = lower_bound_value(N, !no_ones);
  } catch (const std::invalid_argument& e) {
    throw cli_error(error_kind::usage, e.what());
  }
  out << "N " << r.N << "\n";
  out << "with_ones " << (r.with_ones ? "true" : "false") << "\n";
  out << "numerator " << real_str(r.numerator) << "\n";
  out << "denominator " << real_str(r.denominator) << "\n";
  out << "ratio " << real_str(r.ratio) << "\n";
  return 0;
}

inline int cmd_random(std::size_t n, std::int64_t max_q, std::uint64_t seed, bool no_ones, const std::string& output,
                      std::ostream& out) {
  instance_sampler s(seed);
  const instance inst = s.fractions(n, max_q, !no_ones);
  with_output(output, out, [&](std::ostream& o) { write_instance(o, inst); });
  return 0;
}

inline rational parse_rational_arg(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw cli_error(error_kind::usage, flag + ": expected p/q, got '" + text + "'");
  }
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Ordered open end bin packing tools"};
  app.require_subcommand(1);

  run_config cfg;
  int M = 0;

  auto* pack = app.add_subcommand("pack", "Pack an instance with an online algorithm");
  pack->add_option("input", cfg.input, "instance file, - for stdin")->required();
  pack->add_option("--alg", cfg.alg, "nf, nf2, class, class-no-ones")->required();
  pack->add_option("--M", M, "class count for the class algorithms");
  pack->add_option("-o,--output", cfg.output);

  auto* opt = app.add_subcommand("opt", "Exact optimum with a witness packing");
  opt->add_option("input", cfg.input)->required();
  opt->add_option("--max-items", cfg.limits.max_items);
  opt->add_option("-o,--output", cfg.output);

  family_spec spec;
  std::string fam;
  auto* adv = app.add_subcommand("adversary", "Generate an instance of a family");
  adv->add_option("--family", fam)->required();
  adv->add_option("--N", spec.N)->required();
  adv->add_option("--M", spec.M, "seven-power M (default: minimal)");
  adv->add_option("--k", spec.k);
  adv->add_option("--g", spec.g);
  adv->add_option("-o,--output", cfg.output);

  scheme_params sp;
  std::string eps = "1/3", thr, quantum;
  int intervals = 0, groups = 0;
  auto* ap = app.add_subcommand("aptas", "Run the approximation scheme");
  ap->add_option("input", cfg.input)->required();
  ap->add_option("--eps", eps);
  ap->add_option("--intervals", intervals);
  ap->add_option("--groups", groups);
  ap->add_option("--small-threshold", thr);
  ap->add_option("--small-quantum", quantum);
  ap->add_option("--config-cap", sp.config_cap);
  ap->add_option("-o,--output", cfg.output);

  std::vector<std::int64_t> Ns;
  std::string mode = "constructive";
  auto* rep = app.add_subcommand("report", "Ratio table for an algorithm on a family");
  rep->add_option("--alg", cfg.alg)->required();
  rep->add_option("--family", fam)->required();
  rep->add_option("--N", Ns, "one or more N")->required();
  rep->add_option("--opt", mode)->check(CLI::IsMember({"exact", "constructive"}));
  rep->add_option("--M", M, "class count for the class algorithms");
  rep->add_option("--k", spec.k);
  rep->add_option("--g", spec.g);
  rep->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json-lines"}));
  rep->add_option("-o,--output", cfg.output);

  std::string variant = "with-ones";
  int grid = 200;
  auto* vb = app.add_subcommand("verify-bounds", "Largest weight of one bin over a unit-fraction grid");
  vb->add_option("--variant", variant);
  vb->add_option("--grid", grid);
  vb->add_option("--M", M);

  int lbN = 12;
  bool no_ones = false;
  auto* lb = app.add_subcommand("lower-bound", "Lower bound value for given N");
  lb->add_option("--N", lbN)->required();
  lb->add_flag("--no-ones", no_ones);

  std::size_t rn = 10;
  std::int64_t rq = 12;
  std::uint64_t seed = 1;
  auto* rnd = app.add_subcommand("random", "Seeded random instance");
  rnd->add_option("--n", rn);
  rnd->add_option("--max-q", rq);
  rnd->add_option("--seed", seed);
  rnd->add_flag("--no-ones", no_ones);
  rnd->add_option("-o,--output", cfg.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return exit_code(error_kind::usage);
  }

  try {
    apply_env(cfg.limits);
    if (M != 0) cfg.M = M;
    if (*pack) return cmd_pack(cfg, out);
    if (*opt) return cmd_opt(cfg, out);
    if (*adv) {
      try {
        spec.id = parse_family(fam);
      } catch (const invalid_family_params& e) {
        throw cli_error(error_kind::usage, e.what());
      }
      return cmd_adversary(spec, cfg.output, out);
    }
    if (*ap) {
      sp.eps = parse_rational_arg(eps, "--eps");
      if (intervals != 0) sp.intervals = intervals;
      if (groups != 0) sp.groups = groups;
      if (!thr.empty()) sp.small_threshold = parse_rational_arg(thr, "--small-threshold");
      if (!quantum.empty()) sp.small_quantum = parse_rational_arg(quantum, "--small-quantum");
      return cmd_aptas(cfg, sp, out);
    }
    if (*rep) {
      try {
        spec.id = parse_family(fam);
      } catch (const invalid_family_params& e) {
        throw cli_error(error_kind::usage, e.what());
      }
      if (cfg.format == "text") cfg.format = "csv";
      return cmd_report(cfg, spec, Ns, mode == "exact" ? opt_mode::exact : opt_mode::constructive, out);
    }
    if (*vb) return cmd_verify_bounds(variant, grid, cfg.M, out);
    if (*lb) return cmd_lower_bound(lbN, no_ones, out);
    if (*rnd) return cmd_random(rn, rq, seed, no_ones, cfg.output, out);
  } catch (const cli_error& e) {
    err << "error[" << error_tag(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::invalid_argument& e) {
    err << "error[usage]: " << e.what() << "\n";
    return exit_code(error_kind::usage);
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return exit_code(error_kind::internal);
  }
  return exit_code(error_kind::usage);
}

}  // namespace ooebp::cli
