#include "misspair/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "misspair/errors.hpp"

namespace misspair {

namespace {
constexpr double kRhoClamp = 1.0 - 1e-8;
}

MomentEstimates moments(const IncompletePairedSample& s) {
  const auto& comp = s.complete();
  const auto& inc = s.incomplete_first();
  const int nc = s.n_c();
  const int nu = s.n_u();
  const int n = s.n();

  MomentEstimates m;
  m.n_c = nc;
  m.n_u = nu;
  m.kappa1_hat = static_cast<double>(nc) / n;
  m.kappa2_hat = static_cast<double>(nu) / n;

  double sum1c = 0.0, sum2c = 0.0, sum1i = 0.0;
  for (const DataPair& p : comp) {
    sum1c += p.x1;
    sum2c += p.x2;
  }
  for (double v : inc) sum1i += v;
  m.mean1_c = sum1c / nc;
  m.mean2_c = sum2c / nc;
  m.mean1_i = sum1i / nu;

  const double mean1_all = (sum1c + sum1i) / n;
  double ss1 = 0.0;
  for (const DataPair& p : comp) {
    const double d = p.x1 - mean1_all;
    ss1 += d * d;
  }
  for (double v : inc) {
    const double d = v - mean1_all;
    ss1 += d * d;
  }
  m.var1_pooled = ss1 / (n - 1);

  double ss2 = 0.0, ss1c = 0.0, cross = 0.0;
  for (const DataPair& p : comp) {
    const double d1 = p.x1 - m.mean1_c;
    const double d2 = p.x2 - m.mean2_c;
    ss1c += d1 * d1;
    ss2 += d2 * d2;
    cross += d1 * d2;
  }
  m.var2 = ss2 / (nc - 1);

  if (m.var1_pooled == 0.0 || m.var2 == 0.0) {
    throw ZeroVariance("all statistics degenerate: a component variance is 0");
  }

  // The (n_c - 1) divisors cancel. Constant complete-pair first components
  // leave the correlation undefined; report no association.
  const double denom = std::sqrt(ss1c * ss2);
  m.rho_hat = (denom > 0.0) ? cross / denom : 0.0;
  m.rho_hat = std::clamp(m.rho_hat, -1.0, 1.0);
  return m;
}

SigmaHat3 sigma_hat(const MomentEstimates& m) {
  const double sd1 = std::sqrt(m.var1_pooled);
  const double sd2 = std::sqrt(m.var2);
  SigmaHat3 s;
  s.m.a00 = m.var1_pooled / m.kappa1_hat;
  s.m.a01 = m.rho_hat * sd1 * sd2 / m.kappa1_hat;
  s.m.a02 = 0.0;
  s.m.a11 = m.var2 / m.kappa1_hat;
  s.m.a12 = 0.0;
  s.m.a22 = m.var1_pooled / m.kappa2_hat;
  return s;
}

Sym2 gamma_hat(const MomentEstimates& m) {
  const double rho = std::clamp(m.rho_hat, -kRhoClamp, kRhoClamp);
  const double sd1 = std::sqrt(m.var1_pooled);
  const double sd2 = std::sqrt(m.var2);
  Sym2 g;
  g.a = m.var1_pooled;
  g.b = rho * sd1 * sd2;
  g.c = m.var2;
  return g;
}

Vec2 contrast(const IncompletePairedSample& s, const MomentEstimates& m) {
  const double root_n = std::sqrt(static_cast<double>(s.n()));
  return {root_n * (m.mean1_c - m.mean2_c), root_n * (m.mean1_i - m.mean2_c)};
}

}  // namespace misspair
