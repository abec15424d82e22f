#ifndef MISSPAIR_BOOTSTRAP_HPP
#define MISSPAIR_BOOTSTRAP_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "misspair/linalg.hpp"
#include "misspair/rng.hpp"
#include "misspair/sample.hpp"
#include "misspair/statistics.hpp"

namespace misspair {

// How missingness is re-imposed on each bootstrap sample. Mcar keeps the
// observed (n_c, n_u) exactly; MarRule reapplies the 2-sigma deletion rule.
enum class BootstrapMechanism { Mcar, MarRule };

struct BootstrapConfig {
  std::uint64_t B = 1000;
  std::uint64_t seed = 0;
  BootstrapMechanism mechanism = BootstrapMechanism::Mcar;
};

struct BootstrapResult {
  double observed = 0.0;
  double p_value = 1.0;
  std::uint64_t exceed_count = 0;
  std::uint64_t B = 0;
  std::uint64_t degenerate = 0;  // skipped replicates (zero-variance draws)
};

// One parametric bootstrap sample: n = n_c + n_u iid pairs from
// MVN(0, gamma) with a uniformly random subset of exactly n_u second
// components removed.
IncompletePairedSample resample_once(const Sym2& gamma, int n_c, int n_u,
                                     RandomStream& stream);

// Bootstrap p-value of one quadratic-form statistic, counting T* >= T over
// B replicates. Replicate b draws only from the stream keyed by
// (cfg.seed, b), so results do not depend on evaluation order.
BootstrapResult bootstrap_p(const IncompletePairedSample& s, TestKind kind,
                            const BootstrapConfig& cfg);

// Same, for several statistics sharing one set of bootstrap samples. Entry i
// is bit-identical to bootstrap_p(s, kinds[i], cfg).
std::vector<BootstrapResult> bootstrap_p_multi(const IncompletePairedSample& s,
                                               std::span<const TestKind> kinds,
                                               const BootstrapConfig& cfg);

// bootstrap_p wrapped into a TestResult; reject when p_value <= alpha.
TestResult bootstrap_test(const IncompletePairedSample& s, TestKind kind,
                          const BootstrapConfig& cfg, double alpha);

inline bool rejects(const TestResult& r, double alpha) {
  return r.p_value <= alpha;
}

}  // namespace misspair

#endif  // MISSPAIR_BOOTSTRAP_HPP
