#ifndef MISSPAIR_STATISTICS_HPP
#define MISSPAIR_STATISTICS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "misspair/estimate.hpp"
#include "misspair/linalg.hpp"
#include "misspair/sample.hpp"

namespace misspair {

enum class TestKind { Wts, Ats, Mats, Lt, Nct };

std::string_view to_string(TestKind kind);
TestKind test_kind_from_string(std::string_view name);
bool is_bootstrap_kind(TestKind kind);  // true for the quadratic forms

struct NctDetail {
  double t_s = 0.0;
  double t_m = 0.0;
  double variance = 0.0;
  double z = 0.0;
};

struct LtDetail {
  double numerator = 0.0;
  double sigma_lt = 0.0;
  int dof = 0;
};

struct BootstrapDetail {
  std::uint64_t B = 0;
  std::uint64_t exceed_count = 0;
  std::uint64_t degenerate = 0;
};

using TestDetail =
    std::variant<std::monostate, NctDetail, LtDetail, BootstrapDetail>;

struct TestResult {
  TestKind kind = TestKind::Wts;
  double statistic = 0.0;
  double p_value = 1.0;
  TestDetail detail;
};

// The fixed 2x3 contrast mapping the three group means onto the two
// mean-difference estimators: [[1,-1,0],[0,-1,1]].
inline constexpr double kContrast[2][3] = {{1.0, -1.0, 0.0}, {0.0, -1.0, 1.0}};

// A * Sigma * A^T for the contrast above.
Sym2 contrast_covariance(const SigmaHat3& sig);

// Quadratic-form statistics on the contrast vector az.
double wts(const Vec2& az, const SigmaHat3& sig);
double ats(const Vec2& az, const SigmaHat3& sig);  // DegenerateTrace
double mats(const Vec2& az, const SigmaHat3& sig);

// Little's regression-adjusted test, t reference with n_c - 1 df.
// Requires n_c >= 4.
TestResult little(const IncompletePairedSample& s);

// Nonparametric combination of sign and Mann-Whitney proportions,
// normal-approximated around mean 1.
TestResult nct(const IncompletePairedSample& s);

// Weights of the limiting weighted-chi-square law (kind Ats or Mats).
Vec2 limit_weights(const SigmaHat3& sig, TestKind kind);

// Monte Carlo estimate of P(w0*X0 + w1*X1 > x) for iid chi-square(1) X_i.
// Deterministic for a given seed; requires draws >= 10'000.
double weighted_chisq_survival(const Vec2& weights, double x,
                               std::uint64_t draws, std::uint64_t seed);

// Holm step-down adjustment, returned in input order.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

}  // namespace misspair

#endif  // MISSPAIR_STATISTICS_HPP
