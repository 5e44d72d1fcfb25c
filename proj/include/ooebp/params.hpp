#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ooebp/rational.hpp"
#include "ooebp/real.hpp"

namespace ooebp {

/// Denominator used when an irrational split fraction is stored exactly.
inline constexpr __int128 beta_denominator = pow10_int128(24);

/// Class boundaries and split fractions for the class algorithms.
/// beta[i] for 1 <= i <= M; beta[0] is unused and kept at 0.
struct class_params {
  int M = 0;
  std::vector<wide_rational> beta;  // exact value used by the opening rule
  std::vector<real> beta_real;      // high-precision value used by weights

  // Constants the parameters were derived from, when applicable.
  std::optional<real> R;
  std::optional<real> C;
  std::optional<real> theta;
  std::optional<real> delta;
  std::optional<real> Q;

  void validate() const {
    if (M < 2) throw std::invalid_argument("M must be at least 2");
    if (beta.size() != static_cast<std::size_t>(M) + 1 || beta_real.size() != beta.size()) {
      throw std::invalid_argument("beta must have M + 1 entries");
    }
    for (int i = 1; i <= M; ++i) {
      if (beta[i] < wide_rational(0) || beta[i] > wide_rational(1)) {
        throw std::invalid_argument("beta_" + std::to_string(i) + " outside [0,1]");
      }
    }
  }

  void set_beta(int i, const wide_rational& b) {
    beta.at(i) = b;
    beta_real.at(i) = to_real(b);
  }
  void set_beta(int i, const real& b) {
    beta.at(i) = truncate_to_rational(b, beta_denominator);
    beta_real.at(i) = b;
  }

  static class_params uniform(int M, const wide_rational& b) {
    class_params p;
    p.M = M;
    p.beta.assign(static_cast<std::size_t>(M) + 1, b);
    p.beta_real.assign(p.beta.size(), to_real(b));
    p.beta[0] = 0;
    p.beta_real[0] = 0;
    return p;
  }
};

/// t_1 = 22, t_{i+1} = t_i (t_i - 1) + 1. Entries past int64 range are not
/// produced.
inline std::vector<std::int64_t> t_sequence(int count) {
  std::vector<std::int64_t> t;
  std::int64_t cur = 22;
  for (int i = 0; i < count; ++i) {
    t.push_back(cur);
    if (i + 1 < count) cur = detail::checked_add(detail::checked_mul(cur, cur - 1), std::int64_t{1});
  }
  return t;
}

/// C = sum over i of 1/(t_i - 1), summed until the terms vanish at 50 digits.
inline real constant_C() {
  real t = 22;
  real sum = 0;
  const real eps("1e-55");
  while (true) {
    const real term = 1 / (t - 1);
    if (term < eps) break;
    sum += term;
    t = t * (t - 1) + 1;
  }
  return sum;
}

inline real constant_R() { return real(5) / 3 + constant_C() / 2; }

inline class_params default_params_with_ones(int M = 1000) {
  if (M < 6) throw std::invalid_argument("M must be at least 6");
  class_params p = class_params::uniform(M, wide_rational(1));
  const real C = constant_C();
  const real R = real(5) / 3 + C / 2;
  const wide_rational b1(58, 529);
  const real b1r = to_real(b1);
  const real b2 = 3 - (4 - 2 * b1r) / ((3 - R) * (2 - b1r) - 1);
  p.set_beta(1, b1);
  p.set_beta(2, b2);
  p.set_beta(3, wide_rational(148, 287));
  p.set_beta(4, wide_rational(15, 23));
  p.set_beta(5, wide_rational(13, 23));
  p.C = C;
  p.R = R;
  p.validate();
  return p;
}

/// Parameters for inputs without 1-items. M defaults to 100; larger values
/// keep the same beta pattern with beta_i = 1 beyond class 11.
inline class_params default_params_no_ones(int M = 100) {
  if (M < 12) throw std::invalid_argument("M must be at least 12");
  class_params p = class_params::uniform(M, wide_rational(1));
  const real theta("0.038526551295994");
  const real delta("0.319418991002646");
  p.set_beta(1, wide_rational(0));
  p.set_beta(2, real((2 - 6 * delta) / (1 - 2 * delta)));
  for (int i = 3; i <= 11; ++i) p.set_beta(i, real(2 * theta * (i + 1)));
  p.theta = theta;
  p.delta = delta;
  p.Q = 1 / (1 - 2 * theta);
  p.validate();
  return p;
}

}  // namespace ooebp
