#include "misspair/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "misspair/errors.hpp"
#include "misspair/rng.hpp"

namespace misspair {

std::string_view to_string(TestKind kind) {
  switch (kind) {
    case TestKind::Wts:
      return "wts";
    case TestKind::Ats:
      return "ats";
    case TestKind::Mats:
      return "mats";
    case TestKind::Lt:
      return "lt";
    case TestKind::Nct:
      return "nct";
  }
  return "?";
}

TestKind test_kind_from_string(std::string_view name) {
  if (name == "wts") return TestKind::Wts;
  if (name == "ats") return TestKind::Ats;
  if (name == "mats") return TestKind::Mats;
  if (name == "lt") return TestKind::Lt;
  if (name == "nct") return TestKind::Nct;
  throw std::invalid_argument("unknown test kind '" + std::string(name) +
                              "' (expected wts, ats, mats, lt or nct)");
}

bool is_bootstrap_kind(TestKind kind) {
  return kind == TestKind::Wts || kind == TestKind::Ats ||
         kind == TestKind::Mats;
}

Sym2 contrast_covariance(const SigmaHat3& sig) {
  const Sym3& s = sig.m;
  // Rows of A*Sigma, then times A^T. Written out for the fixed contrast.
  Sym2 m;
  m.a = s.a00 - 2.0 * s.a01 + s.a11;
  m.b = s.a02 - s.a01 - s.a12 + s.a11;
  m.c = s.a22 - 2.0 * s.a12 + s.a11;
  return m;
}

double wts(const Vec2& az, const SigmaHat3& sig) {
  const Sym2 m = contrast_covariance(sig);
  return quad_form(az, pinv(m));
}

double ats(const Vec2& az, const SigmaHat3& sig) {
  const double tr = contrast_covariance(sig).trace();
  if (tr <= 0.0) {
    throw DegenerateTrace("trace of the contrast covariance is not positive");
  }
  return (az.x0 * az.x0 + az.x1 * az.x1) / tr;
}

double mats(const Vec2& az, const SigmaHat3& sig) {
  const Sym2 inv = pinv(contrast_covariance(sig));
  return az.x0 * az.x0 * inv.a + az.x1 * az.x1 * inv.c;
}

TestResult little(const IncompletePairedSample& s) {
  const int nc = s.n_c();
  const int n = s.n();
  if (nc < 4) {
    throw TooFewComplete("Little's test needs at least 4 complete pairs");
  }

  double sum1c = 0.0, sum2c = 0.0, sum1i = 0.0;
  for (const DataPair& p : s.complete()) {
    sum1c += p.x1;
    sum2c += p.x2;
  }
  for (double v : s.incomplete_first()) sum1i += v;
  const double m1c = sum1c / nc;
  const double m2c = sum2c / nc;
  const double m1all = (sum1c + sum1i) / n;

  double ss1c = 0.0, ss2 = 0.0, cross = 0.0;
  for (const DataPair& p : s.complete()) {
    const double d1 = p.x1 - m1c;
    const double d2 = p.x2 - m2c;
    ss1c += d1 * d1;
    ss2 += d2 * d2;
    cross += d1 * d2;
  }
  double ss1 = 0.0;
  for (const DataPair& p : s.complete()) {
    const double d = p.x1 - m1all;
    ss1 += d * d;
  }
  for (double v : s.incomplete_first()) {
    const double d = v - m1all;
    ss1 += d * d;
  }

  const double var1c = ss1c / (nc - 1);   // complete-pair firsts, NOT pooled
  const double var2 = ss2 / (nc - 1);
  const double var1 = ss1 / (n - 1);      // pooled firsts
  if (var1c <= 0.0 || var2 <= 0.0) {
    throw ZeroVariance("Little's test: degenerate component variance");
  }
  const double rho = cross / std::sqrt(ss1c * ss2);
  const double beta_hat = cross / ss1c;  // regression slope of x2 on x1

  const double sigma_sq_cond = var2 * (1.0 - rho * rho);
  const double sigma_sq_x = sigma_sq_cond + beta_hat * beta_hat * var1;
  const double inv_n = 1.0 / n;
  const double sigma_sq_lt =
      sigma_sq_x * inv_n +
      (1.0 / nc - inv_n) * (static_cast<double>(nc - 2) / (nc - 3)) *
          sigma_sq_cond -
      2.0 * inv_n * beta_hat * var1 + var1 * inv_n;
  if (sigma_sq_lt <= 0.0) {
    throw ZeroVariance("Little's test: variance estimate not positive");
  }

  const double numerator = m1all - m2c - beta_hat * (m1all - m1c);
  const double sigma_lt = std::sqrt(sigma_sq_lt);
  const double t = numerator / sigma_lt;

  boost::math::students_t_distribution<double> t_dist(nc - 1);
  const double p = 2.0 * boost::math::cdf(t_dist, -std::fabs(t));

  TestResult r;
  r.kind = TestKind::Lt;
  r.statistic = t;
  r.p_value = p;
  r.detail = LtDetail{numerator, sigma_lt, nc - 1};
  return r;
}

namespace {

// 1 if first beats second, 1/2 on ties, 0 otherwise.
double win_share(double first, double second) {
  if (first > second) return 1.0;
  if (first == second) return 0.5;
  return 0.0;
}

double normal_two_sided_p(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

}  // namespace

TestResult nct(const IncompletePairedSample& s) {
  const auto& comp = s.complete();
  const auto& inc = s.incomplete_first();
  const int nc = s.n_c();
  const int nu = s.n_u();

  double t_s = 0.0;
  for (const DataPair& p : comp) t_s += win_share(p.x1, p.x2);
  t_s /= nc;

  double t_m = 0.0;
  for (double xi : inc) {
    for (const DataPair& p : comp) t_m += win_share(xi, p.x2);
  }
  t_m /= static_cast<double>(nc) * nu;

  // Covariance of the two proportions, sharing the complete-pair index in
  // both indicators so the estimator is defined for every (n_c, n_u).
  double joint = 0.0;
  for (const DataPair& p : comp) {
    if (!(p.x1 > p.x2)) continue;
    for (double xi : inc) {
      if (xi > p.x2) joint += 1.0;
    }
  }
  const double cov =
      joint / (static_cast<double>(nc) * nc * nu) - t_s * t_m / nc;

  const double variance = 1.0 / nc +
                          static_cast<double>(nc + nu + 1) /
                              (12.0 * static_cast<double>(nc) * nu) +
                          cov;
  if (variance <= 0.0) {
    throw ZeroVariance("combination test: variance estimate not positive");
  }

  const double statistic = t_s + t_m;
  const double z = (statistic - 1.0) / std::sqrt(variance);

  TestResult r;
  r.kind = TestKind::Nct;
  r.statistic = statistic;
  r.p_value = normal_two_sided_p(z);
  r.detail = NctDetail{t_s, t_m, variance, z};
  return r;
}

Vec2 limit_weights(const SigmaHat3& sig, TestKind kind) {
  const Sym2 m = contrast_covariance(sig);
  if (kind == TestKind::Ats) {
    const double tr = m.trace();
    if (tr <= 0.0) {
      throw DegenerateTrace(
          "trace of the contrast covariance is not positive");
    }
    const EigSym2 e = eig_sym(m);
    return {e.values.x0 / tr, e.values.x1 / tr};
  }
  if (kind == TestKind::Mats) {
    // Eigenvalues of D * M with D = diag(pinv(M)); real and nonnegative, so
    // compute them from the similar symmetric matrix sqrt(D) M sqrt(D).
    const Sym2 inv = pinv(m);
    const double r0 = std::sqrt(std::max(inv.a, 0.0));
    const double r1 = std::sqrt(std::max(inv.c, 0.0));
    Sym2 sym;
    sym.a = inv.a * m.a;
    sym.b = r0 * r1 * m.b;
    sym.c = inv.c * m.c;
    const EigSym2 e = eig_sym(sym);
    return {e.values.x0, e.values.x1};
  }
  throw std::invalid_argument(
      "limit_weights is defined for the ats and mats statistics only");
}

double weighted_chisq_survival(const Vec2& weights, double x,
                               std::uint64_t draws, std::uint64_t seed) {
  if (weights.x0 < 0.0 || weights.x1 < 0.0) {
    throw std::invalid_argument("weights must be nonnegative");
  }
  if (draws < 10'000) {
    throw std::invalid_argument("need at least 10'000 draws");
  }
  RandomStream stream = RandomStream::keyed(seed, stream_id::kChisqOracle);
  std::uint64_t exceed = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto [z0, z1] = stream.normal_pair();
    if (weights.x0 * z0 * z0 + weights.x1 * z1 * z1 > x) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(draws);
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error("p-value out of [0,1]");
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return p_values[i] < p_values[j];
  });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double scaled =
        p_values[order[rank]] * static_cast<double>(m - rank);
    running = std::max(running, std::min(scaled, 1.0));
    adjusted[order[rank]] = running;
  }
  return adjusted;
}

}  // namespace misspair
