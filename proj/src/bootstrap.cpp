#include "misspair/bootstrap.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "misspair/errors.hpp"
#include "misspair/estimate.hpp"
#include "misspair/simulate.hpp"

namespace misspair {

namespace {

std::vector<DataPair> draw_pairs_mvn(const Sym2& gamma, int n,
                                     RandomStream& stream) {
  const Lower2 l = cholesky_lower(gamma);
  std::vector<DataPair> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto [z0, z1] = stream.normal_pair();
    pairs.push_back({l.l00 * z0, l.l10 * z0 + l.l11 * z1});
  }
  return pairs;
}

double evaluate(TestKind kind, const Vec2& az, const SigmaHat3& sig) {
  switch (kind) {
    case TestKind::Wts:
      return wts(az, sig);
    case TestKind::Ats:
      return ats(az, sig);
    case TestKind::Mats:
      return mats(az, sig);
    default:
      throw std::invalid_argument(
          "bootstrap is defined for the quadratic-form statistics only");
  }
}

}  // namespace

IncompletePairedSample resample_once(const Sym2& gamma, int n_c, int n_u,
                                     RandomStream& stream) {
  const int n = n_c + n_u;
  const auto pairs = draw_pairs_mvn(gamma, n, stream);
  return impose_mcar(pairs, n_u, stream);
}

std::vector<BootstrapResult> bootstrap_p_multi(const IncompletePairedSample& s,
                                               std::span<const TestKind> kinds,
                                               const BootstrapConfig& cfg) {
  if (cfg.B < 1) throw std::invalid_argument("B must be at least 1");
  for (TestKind k : kinds) {
    if (!is_bootstrap_kind(k)) {
      throw std::invalid_argument(
          "bootstrap is defined for the quadratic-form statistics only");
    }
  }

  const MomentEstimates m = moments(s);
  const Sym2 gamma = gamma_hat(m);
  const SigmaHat3 sig = sigma_hat(m);
  const Vec2 az = contrast(s, m);

  std::vector<BootstrapResult> results(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    results[i].observed = evaluate(kinds[i], az, sig);
    results[i].B = cfg.B;
  }

  std::uint64_t degenerate = 0;
  for (std::uint64_t b = 0; b < cfg.B; ++b) {
    RandomStream stream =
        RandomStream::keyed(cfg.seed, stream_id::kBootstrapReplicate, b);
    try {
      IncompletePairedSample star =
          (cfg.mechanism == BootstrapMechanism::Mcar)
              ? resample_once(gamma, s.n_c(), s.n_u(), stream)
              : impose_mar(draw_pairs_mvn(gamma, s.n(), stream), stream);
      const MomentEstimates ms = moments(star);
      const SigmaHat3 sig_star = sigma_hat(ms);
      const Vec2 az_star = contrast(star, ms);
      for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (evaluate(kinds[i], az_star, sig_star) >= results[i].observed) {
          ++results[i].exceed_count;
        }
      }
    } catch (const ZeroVariance&) {
      ++degenerate;  // probability zero for continuous draws
    }
  }

  if (degenerate * 100 > cfg.B) {
    throw Error("more than 1% of bootstrap replicates degenerate (" +
                std::to_string(degenerate) + " of " + std::to_string(cfg.B) +
                ")");
  }
  const std::uint64_t valid = cfg.B - degenerate;
  for (BootstrapResult& r : results) {
    r.degenerate = degenerate;
    r.p_value = static_cast<double>(r.exceed_count) / valid;
  }
  return results;
}

BootstrapResult bootstrap_p(const IncompletePairedSample& s, TestKind kind,
                            const BootstrapConfig& cfg) {
  const TestKind kinds[1] = {kind};
  return bootstrap_p_multi(s, kinds, cfg)[0];
}

TestResult bootstrap_test(const IncompletePairedSample& s, TestKind kind,
                          const BootstrapConfig& cfg, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  const BootstrapResult b = bootstrap_p(s, kind, cfg);
  TestResult r;
  r.kind = kind;
  r.statistic = b.observed;
  r.p_value = b.p_value;
  r.detail = BootstrapDetail{b.B, b.exceed_count, b.degenerate};
  return r;
}

}  // namespace misspair
