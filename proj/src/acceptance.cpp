// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ooebp/ooebp.hpp"

using namespace ooebp;

namespace {

struct outcome {
  bool ok = true;
  std::string detail;
};

struct checker {
  outcome& out;
  void require(bool cond, const std::string& what) {
    if (!cond && out.ok) {
      out.ok = false;
      out.detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const real& x, int digits = 12) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

// Instances from criteria 1-6 on which the class algorithms are run for 11.
struct class_case {
  std::string name;
  instance inst;
  bool with_ones = true;
  int M = 1000;
};
std::vector<class_case> class_cases;

void add_class_case(const std::string& name, const instance& inst, int M_with = 1000, int M_without = 100) {
  class_cases.push_back({name, inst, true, M_with});
  if (!inst.has_one_items()) class_cases.push_back({name, inst, false, M_without});
}

outcome criterion1() {
  outcome o;
  checker c{o};
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream d;
  for (std::int64_t N : {10, 100}) {
    const instance inst = gen_nf_tight(N);
    const packing alg = next_fit(inst);
    const packing opt = construct_nf_tight_opt(inst);
    c.require(alg.cost() == static_cast<std::size_t>(2 * N), "N=" + std::to_string(N) + ": nf cost " + std::to_string(alg.cost()));
    c.require(!validate_packing(inst, opt), "N=" + std::to_string(N) + ": constructive packing invalid");
    c.require(opt.cost() == static_cast<std::size_t>(N + 1), "N=" + std::to_string(N) + ": opt cost " + std::to_string(opt.cost()));
    if (N == 100) {
      c.require(alg.cost() * 100 >= 198 * opt.cost(), "ratio below 1.98");
      d << "N=100 nf=" << alg.cost() << " opt=" << opt.cost();
    }
    add_class_case("nf_tight N=" + std::to_string(N), inst);
  }
  c.require(seconds_since(t0) < 1.0, "runtime above 1.0 s");
  if (o.ok) o.detail = d.str();
  return o;
}

outcome criterion2() {
  outcome o;
  checker c{o};
  const auto t0 = std::chrono::steady_clock::now();
  instance_sampler rs(20260201);
  std::size_t worst_gap_case = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = rs.uniform(1, 12);
    const instance inst = rs.fractions(n, 12, false);
    const std::size_t a = nf2(inst).cost();
    const std::size_t opt = optimal_cost(inst).cost;
    c.require(2 * a <= 3 * opt + 4, "case " + std::to_string(t) + ": nf2 " + std::to_string(a) + " opt " + std::to_string(opt));
    worst_gap_case = std::max(worst_gap_case, 2 * a > 3 * opt ? 2 * a - 3 * opt : 0);
    if (t < 20) add_class_case("random no-ones #" + std::to_string(t), inst);
  }
  c.require(seconds_since(t0) < 120, "runtime above 120 s");
  if (o.ok) o.detail = "500 instances, max 2*nf2-3*opt = " + std::to_string(worst_gap_case);
  return o;
}

outcome criterion3() {
  outcome o;
  checker c{o};
  const int N = 10;
  const instance full = gen_sec4_batches(N);
  for (int i = 1; i <= N; ++i) {
    const auto [prefix, p] = construct_sec4_prefix_opt(full, i);
    c.require(!validate_packing(prefix, p), "batch " + std::to_string(i) + ": packing invalid");
    c.require(p.cost() <= static_cast<std::size_t>(i), "batch " + std::to_string(i) + ": " + std::to_string(p.cost()) + " bins");
  }
  const packing fin = construct_sec4_opt(full);
  c.require(!validate_packing(full, fin), "final packing invalid");
  c.require(fin.cost() <= static_cast<std::size_t>(N + 1), "final packing uses " + std::to_string(fin.cost()) + " bins");
  add_class_case("sec4_batches N=10", full);
  if (o.ok) o.detail = "final " + std::to_string(fin.cost()) + " bins";
  return o;
}

outcome criterion4() {
  outcome o;
  checker c{o};
  const std::int64_t step = sec5_multiplier(2);
  const class_params params = default_params_with_ones(1000);
  const real target = real(1563) / 924;
  std::ostringstream d;
  for (std::int64_t N : {step, 2 * step}) {
    const instance inst = gen_sec5_bad(N, 2);
    const class_run run = class_algorithm(inst, params);
    const packing opt = construct_sec5_opt(inst, N, 2);
    c.require(!validate_packing(inst, opt), "N=" + std::to_string(N) + ": constructive packing invalid");
    const real ratio = real(run.result.cost()) / real(opt.cost());
    if (N == step) c.require(ratio >= real("1.6915"), "N=" + std::to_string(N) + ": ratio " + fmt(ratio));
    if (N == 2 * step) c.require(abs(ratio - target) <= real("5e-4"), "N=" + std::to_string(N) + ": ratio " + fmt(ratio));
    d << "N=" << N << " ratio " << fmt(ratio, 9) << "; ";
    if (N == step) class_cases.push_back({"sec5_bad N=" + std::to_string(N), inst, true, 1000});
  }
  if (o.ok) o.detail = d.str();
  return o;
}

outcome criterion5() {
  outcome o;
  checker c{o};
  const auto t0 = std::chrono::steady_clock::now();
  const class_params with = default_params_with_ones(1000);
  const class_params without = default_params_no_ones(100);
  const bin_weight_result a = verify_bin_weight_bound(algorithm_variant::with_ones, with, 200);
  const bin_weight_result b = verify_bin_weight_bound(algorithm_variant::no_ones, without, 200);
  c.require(a.max_weight <= real("1.69156078") + real("1e-9"), "with ones: max " + fmt(a.max_weight));
  c.require(b.max_weight <= real("1.44465") + real("1e-9"), "no ones: max " + fmt(b.max_weight));
  const weight_scheme w(weight_variant::w_with_ones, with);
  const real witness = bin_weight(w, {rational(1, 2), rational(1, 3), rational(1)});
  c.require(abs(witness - constant_R()) <= real("1e-9"), "witness weight " + fmt(witness));
  const double secs = seconds_since(t0);
  c.require(secs < 300, "runtime " + std::to_string(secs) + " s");
  if (o.ok) o.detail = "with ones " + fmt(a.max_weight) + ", no ones " + fmt(b.max_weight);
  return o;
}

outcome criterion6() {
  outcome o;
  checker c{o};
  const std::int64_t N = sec6_multiplier;
  const instance inst = gen_sec6_bad(N);
  const class_params params = default_params_no_ones(100001);
  const class_run run = class_algorithm_no_ones(inst, params);
  const packing opt = construct_sec6_opt(inst, N);
  c.require(!validate_packing(inst, opt), "constructive packing invalid");
  const real per_n = real(run.result.cost()) / N;
  const real ratio = real(run.result.cost()) / real(opt.cost());
  c.require(abs(per_n - real("32.9978979841943")) <= real("1e-3"), "cost/N " + fmt(per_n));
  c.require(abs(ratio - real("1.4346912167")) <= real("1e-3"), "ratio " + fmt(ratio));
  class_cases.push_back({"sec6_bad N=" + std::to_string(N), inst, false, 100001});
  if (o.ok) o.detail = "cost/N " + fmt(per_n, 6) + ", ratio " + fmt(ratio, 6);
  return o;
}

outcome criterion7() {
  outcome o;
  checker c{o};
  const auto t0 = std::chrono::steady_clock::now();
  const lower_bound_report a = lower_bound_value(12, true);
  const lower_bound_report b = lower_bound_value(12, false);
  const real head = lower_bound_series_head();
  c.require(abs(a.ratio - real("1.6304835981151")) <= real("1e-9"), "with ones " + fmt(a.ratio, 15));
  c.require(abs(b.ratio - real("1.41575234447271")) <= real("1e-8"), "no ones " + fmt(b.ratio, 15));
  c.require(abs(head - real("0.0204239557816752")) <= real("1e-12"), "series head " + fmt(head, 17));
  c.require(seconds_since(t0) < 1.0, "runtime above 1 s");
  if (o.ok) o.detail = "with ones " + fmt(a.ratio, 13) + ", no ones " + fmt(b.ratio, 13);
  return o;
}

outcome criterion8() {
  outcome o;
  checker c{o};
  const seven_power_params sp = seven_power_params::minimal(2);
  const std::int64_t M = sp.M;
  for (int k = 1; k <= 2; ++k) {
    const instance inst = gen_seven_power(seven_kind::I, sp, k);
    const packing p = construct_seven_power_opt(inst, seven_kind::I, sp, k);
    const std::int64_t mp = sp.m_prime(k);
    c.require(!validate_packing(inst, p), "I" + std::to_string(k) + ": packing invalid");
    c.require(p.cost() == static_cast<std::size_t>(mp), "I" + std::to_string(k) + ": " + std::to_string(p.cost()) + " bins");
    const std::int64_t p7 = k == 1 ? 7 : 49;
    c.require(rational(mp) <= rational(7 * M, 6 * (p7 + 1)), "M'_" + std::to_string(k) + " above 7M/(6(7^k+1))");
  }
  const struct {
    seven_kind kind;
    const char* name;
    rational cap;
  } js[] = {{seven_kind::J3, "J3", rational(3 * M, 8)},
            {seven_kind::J2, "J2", rational(2 * M, 3)},
            {seven_kind::J22, "J22", rational(M)},
            {seven_kind::J1, "J1", rational(M)}};
  for (const auto& j : js) {
    const instance inst = gen_seven_power(j.kind, sp);
    const packing p = construct_seven_power_opt(inst, j.kind, sp);
    c.require(!validate_packing(inst, p), std::string(j.name) + ": packing invalid");
    c.require(rational(static_cast<std::int64_t>(p.cost())) <= j.cap, std::string(j.name) + ": " + std::to_string(p.cost()) + " bins");
  }
  if (o.ok) o.detail = "M=" + std::to_string(M) + ", M'_1=" + std::to_string(sp.m_prime(1)) + ", M'_2=" + std::to_string(sp.m_prime(2));
  return o;
}

outcome criterion9() {
  outcome o;
  checker c{o};
  const auto t0 = std::chrono::steady_clock::now();
  instance_sampler rs(20260209);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = rs.uniform(1, 9);
    const instance inst = rs.unit_fractions(n, 9);
    const exact_result r = optimal_cost(inst);
    const std::size_t b = optimal_cost_bruteforce(inst);
    c.require(r.cost == b, "case " + std::to_string(t) + ": " + std::to_string(r.cost) + " vs " + std::to_string(b));
    c.require(!validate_packing(inst, r.witness) && r.witness.cost() == r.cost, "case " + std::to_string(t) + ": witness");
  }
  c.require(seconds_since(t0) < 300, "runtime above 300 s");
  if (o.ok) o.detail = "500 instances";
  return o;
}

outcome criterion10() {
  outcome o;
  checker c{o};
  scheme_params sp;
  sp.eps = rational(1, 3);
  sp.intervals = 3;
  sp.groups = 3;
  sp.small_threshold = rational(1, 9);
  instance_sampler rs(20260210);
  std::size_t models = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = rs.uniform(1, 12);
    const instance inst = rs.fractions(n, 12);
    const aptas_result r = run_aptas(inst, sp, [&](const aptas_guess& g) {
      ++models;
      const std::string where = "case " + std::to_string(t) + " " + certificate_str(g.cert);
      c.require(solve_conf_ip_bruteforce(g.model) == g.solution.cost, where + ": IP differs from oracle");
      c.require(!validate_packing(g.padded.inst, g.packed.padded), where + ": padded packing invalid");
      const rational bound = (rational(1) + sp.eps) * rational(g.solution.cost) + rational(1) / sp.eps;
      c.require(rational(static_cast<std::int64_t>(g.packed.padded_bins)) <= bound, where + ": post-process bins above bound");
    });
    c.require(!validate_packing(inst, r.best), "case " + std::to_string(t) + ": output invalid");
    c.require(r.best.cost() >= optimal_cost(inst).cost, "case " + std::to_string(t) + ": below optimum");
  }
  if (o.ok) o.detail = "200 instances, " + std::to_string(models) + " models";
  return o;
}

outcome criterion11() {
  outcome o;
  checker c{o};
  std::size_t runs = 0;
  for (const auto& cc : class_cases) {
    const class_params params = cc.with_ones ? default_params_with_ones(cc.M) : default_params_no_ones(cc.M);
    const class_run run = cc.with_ones ? class_algorithm(cc.inst, params) : class_algorithm_no_ones(cc.inst, params);
    const partition_report rep =
        trace_partition(cc.inst, run, params, cc.with_ones ? algorithm_variant::with_ones : algorithm_variant::no_ones);
    c.require(rep.holds(), cc.name + (cc.with_ones ? "" : " (no ones)") + ": cost " + std::to_string(rep.cost) + " > " +
                               fmt(rep.bound(), 3));
    ++runs;
  }
  if (o.ok) o.detail = std::to_string(runs) + " runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8,
                                                          criterion9, criterion10, criterion11};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.ok ? 0 : 1;
    std::printf("criterion %2zu: %s (%.2f s) %s\n", i + 1, o.ok ? "PASS" : "FAIL", seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
