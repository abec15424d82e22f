#ifndef MISSPAIR_ESTIMATE_HPP
#define MISSPAIR_ESTIMATE_HPP

#include "misspair/linalg.hpp"
#include "misspair/sample.hpp"

namespace misspair {

// Every sample moment the test statistics are built from. var1_pooled is the
// unbiased variance of all n first components pooled across both groups;
// var2 and rho_hat come from the complete pairs only.
struct MomentEstimates {
  double mean1_c = 0.0;
  double mean2_c = 0.0;
  double mean1_i = 0.0;
  double var1_pooled = 0.0;
  double var2 = 0.0;
  double rho_hat = 0.0;
  double kappa1_hat = 0.0;  // n_c / n
  double kappa2_hat = 0.0;  // n_u / n
  int n_c = 0;
  int n_u = 0;
};

// Structured 3x3 covariance estimate of the normalized mean vector. The
// (1,3) and (2,3) entries are exactly zero: the complete and incomplete
// blocks are independent under the model.
struct SigmaHat3 {
  Sym3 m;
};

// Throws ZeroVariance when var1_pooled or var2 vanishes.
MomentEstimates moments(const IncompletePairedSample& s);

SigmaHat3 sigma_hat(const MomentEstimates& m);

// 2x2 covariance estimate used to drive the parametric bootstrap sampler.
// rho_hat is clamped to +/-(1 - 1e-8) so the factorization cannot fail.
Sym2 gamma_hat(const MomentEstimates& m);

// sqrt(n) * (mean1_c - mean2_c, mean1_i - mean2_c); under the null the
// unknown common mean cancels.
Vec2 contrast(const IncompletePairedSample& s, const MomentEstimates& m);

}  // namespace misspair

#endif  // MISSPAIR_ESTIMATE_HPP
