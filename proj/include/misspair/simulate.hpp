#ifndef MISSPAIR_SIMULATE_HPP
#define MISSPAIR_SIMULATE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "misspair/bootstrap.hpp"
#include "misspair/linalg.hpp"
#include "misspair/rng.hpp"
#include "misspair/sample.hpp"
#include "misspair/statistics.hpp"

namespace misspair {

// Residual laws of the data generator, each standardized to mean 0 and
// variance 1.
enum class ResidualDist { Normal, Laplace, Exponential, ChiSq30 };

// Population covariance designs: Sigma1 = [[1, rho], [rho, 1]] and
// Sigma2 = [[1, sqrt(2) rho], [sqrt(2) rho, 2]].
enum class CovDesign { Homoscedastic, Heteroscedastic };

std::string_view to_string(ResidualDist d);
std::string_view to_string(CovDesign d);
ResidualDist residual_dist_from_string(std::string_view name);
CovDesign cov_design_from_string(std::string_view name);

// Missingness mechanism of one simulation cell. MCAR fixes (n_c, n_u);
// MAR fixes only the number of subjects n and deletes by the 2-sigma rule.
struct MechanismSpec {
  enum class Kind { Mcar, Mar };
  Kind kind = Kind::Mcar;
  int n_c = 0;
  int n_u = 0;
  int n = 0;

  static MechanismSpec mcar(int n_c, int n_u) {
    return {Kind::Mcar, n_c, n_u, n_c + n_u};
  }
  static MechanismSpec mar(int n) { return {Kind::Mar, 0, 0, n}; }
};

struct Scenario {
  ResidualDist distribution = ResidualDist::Normal;
  double rho = 0.0;
  CovDesign design = CovDesign::Homoscedastic;
  MechanismSpec mechanism;
  double delta = 0.0;  // shift on the first component mean
  double alpha = 0.05;
};

Sym2 population_covariance(CovDesign design, double rho);

// One standardized residual draw.
double residual(ResidualDist dist, RandomStream& stream);

// n pairs X = L eps + (delta, 0) with L the lower Cholesky factor of the
// scenario's covariance design.
std::vector<DataPair> gen_complete(const Scenario& sc, int n,
                                   RandomStream& stream);

// Deletes the second component of a uniformly random subset of exactly n_u
// units.
IncompletePairedSample impose_mcar(std::span<const DataPair> pairs, int n_u,
                                   RandomStream& stream);

// 2-sigma MAR rule: units are grouped by their first component at
// +/- 2 sigma_hat_1 and lose the second component with probability 0.15
// (outer groups) or 0.30 (central group). The pattern is redrawn until
// n_c >= 4 and n_u >= 1, at most 1000 attempts.
IncompletePairedSample impose_mar(std::span<const DataPair> pairs,
                                  RandomStream& stream);

struct TestTally {
  std::uint64_t rejected = 0;
  std::uint64_t evaluated = 0;

  double rate() const {
    return evaluated ? static_cast<double>(rejected) / evaluated : 0.0;
  }
};

struct RejectionRates {
  std::vector<TestKind> tests;
  std::vector<TestTally> tallies;  // aligned with tests
  std::uint64_t n_sim = 0;
  std::uint64_t B = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo rejection rates of the requested tests under one scenario.
// Runs are keyed by (cfg.seed, run index) so the result is identical for any
// thread count. Little's test runs with n_c < 4 are excluded from its
// denominator; all other failures propagate.
RejectionRates run_scenario(const Scenario& sc, std::uint64_t n_sim,
                            const BootstrapConfig& cfg,
                            std::span<const TestKind> tests, int threads = 1);

}  // namespace misspair

#endif  // MISSPAIR_SIMULATE_HPP
