#include "misspair/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "misspair/errors.hpp"
#include "misspair/estimate.hpp"

namespace misspair {

std::string_view to_string(ResidualDist d) {
  switch (d) {
    case ResidualDist::Normal:
      return "normal";
    case ResidualDist::Laplace:
      return "laplace";
    case ResidualDist::Exponential:
      return "exponential";
    case ResidualDist::ChiSq30:
      return "chisq30";
  }
  return "?";
}

std::string_view to_string(CovDesign d) {
  return d == CovDesign::Homoscedastic ? "homoscedastic" : "heteroscedastic";
}

ResidualDist residual_dist_from_string(std::string_view name) {
  if (name == "normal") return ResidualDist::Normal;
  if (name == "laplace") return ResidualDist::Laplace;
  if (name == "exponential") return ResidualDist::Exponential;
  if (name == "chisq30") return ResidualDist::ChiSq30;
  throw std::invalid_argument(
      "unknown distribution '" + std::string(name) +
      "' (expected normal, laplace, exponential or chisq30)");
}

CovDesign cov_design_from_string(std::string_view name) {
  if (name == "homoscedastic") return CovDesign::Homoscedastic;
  if (name == "heteroscedastic") return CovDesign::Heteroscedastic;
  throw std::invalid_argument("unknown design '" + std::string(name) +
                              "' (expected homoscedastic or heteroscedastic)");
}

Sym2 population_covariance(CovDesign design, double rho) {
  if (design == CovDesign::Homoscedastic) {
    return {1.0, rho, 1.0};
  }
  return {1.0, std::sqrt(2.0) * rho, 2.0};
}

double residual(ResidualDist dist, RandomStream& stream) {
  switch (dist) {
    case ResidualDist::Normal:
      return stream.normal();
    case ResidualDist::Laplace: {
      // Inverse CDF with scale 1/sqrt(2), so the variance is 1.
      const double u = stream.uniform01_open();
      const double scale = 1.0 / std::sqrt(2.0);
      return u < 0.5 ? scale * std::log(2.0 * u)
                     : -scale * std::log(2.0 * (1.0 - u));
    }
    case ResidualDist::Exponential:
      return -std::log(stream.uniform01_open()) - 1.0;
    case ResidualDist::ChiSq30: {
      double sum = 0.0;
      for (int i = 0; i < 30; ++i) {
        const double z = stream.normal();
        sum += z * z;
      }
      return (sum - 30.0) / std::sqrt(60.0);
    }
  }
  throw std::invalid_argument("unknown residual distribution");
}

std::vector<DataPair> gen_complete(const Scenario& sc, int n,
                                   RandomStream& stream) {
  const Lower2 l = cholesky_lower(population_covariance(sc.design, sc.rho));
  std::vector<DataPair> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double e1 = residual(sc.distribution, stream);
    const double e2 = residual(sc.distribution, stream);
    pairs.push_back({l.l00 * e1 + sc.delta, l.l10 * e1 + l.l11 * e2});
  }
  return pairs;
}

IncompletePairedSample impose_mcar(std::span<const DataPair> pairs, int n_u,
                                   RandomStream& stream) {
  const int n = static_cast<int>(pairs.size());
  if (n_u >= n || n - n_u < 2) {
    throw InvalidCounts("impose_mcar: need n_u < n and n - n_u >= 2");
  }
  // Partial Fisher-Yates: the first n_u entries of idx become the deleted set.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < n_u; ++i) {
    const int j = i + static_cast<int>(stream.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> missing(n, false);
  for (int i = 0; i < n_u; ++i) missing[idx[i]] = true;

  std::vector<DataPair> complete;
  std::vector<double> incomplete_first;
  complete.reserve(n - n_u);
  incomplete_first.reserve(n_u);
  for (int i = 0; i < n; ++i) {
    if (missing[i]) {
      incomplete_first.push_back(pairs[i].x1);
    } else {
      complete.push_back(pairs[i]);
    }
  }
  return IncompletePairedSample(std::move(complete),
                                std::move(incomplete_first));
}

IncompletePairedSample impose_mar(std::span<const DataPair> pairs,
                                  RandomStream& stream) {
  const int n = static_cast<int>(pairs.size());
  if (n < 6) throw InvalidCounts("impose_mar: need at least 6 units");

  double sum = 0.0;
  for (const DataPair& p : pairs) sum += p.x1;
  const double mean = sum / n;
  double ss = 0.0;
  for (const DataPair& p : pairs) {
    const double d = p.x1 - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1));
  const double cut = 2.0 * sd;

  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<DataPair> complete;
    std::vector<double> incomplete_first;
    for (const DataPair& p : pairs) {
      const double rate = (std::fabs(p.x1) <= cut) ? 0.30 : 0.15;
      if (stream.uniform01() < rate) {
        incomplete_first.push_back(p.x1);
      } else {
        complete.push_back(p);
      }
    }
    if (static_cast<int>(complete.size()) >= 4 && !incomplete_first.empty()) {
      return IncompletePairedSample(std::move(complete),
                                    std::move(incomplete_first));
    }
  }
  throw PatternRedrawExhausted(
      "impose_mar: no admissible missingness pattern in 1000 attempts");
}

namespace {

struct RunOutcome {
  // Per requested test: 0 = accepted, 1 = rejected, 2 = skipped.
  std::vector<std::uint8_t> verdicts;
};

RunOutcome simulate_one_run(const Scenario& sc, const BootstrapConfig& cfg,
                            std::span<const TestKind> tests,
                            std::span<const TestKind> boot_kinds,
                            std::uint64_t run) {
  RandomStream data_stream =
      RandomStream::keyed(cfg.seed, stream_id::kScenarioData, run);
  const std::vector<DataPair> pairs =
      gen_complete(sc, sc.mechanism.n, data_stream);

  RandomStream miss_stream =
      RandomStream::keyed(cfg.seed, stream_id::kScenarioMissing, run);
  const IncompletePairedSample sample =
      sc.mechanism.kind == MechanismSpec::Kind::Mcar
          ? impose_mcar(pairs, sc.mechanism.n_u, miss_stream)
          : impose_mar(pairs, miss_stream);

  std::vector<BootstrapResult> boot;
  if (!boot_kinds.empty()) {
    BootstrapConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(cfg.seed, stream_id::kScenarioBootstrapSeed, run);
    boot = bootstrap_p_multi(sample, boot_kinds, run_cfg);
  }

  RunOutcome out;
  out.verdicts.resize(tests.size(), 2);
  std::size_t boot_index = 0;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    switch (tests[t]) {
      case TestKind::Wts:
      case TestKind::Ats:
      case TestKind::Mats:
        out.verdicts[t] = boot[boot_index++].p_value <= sc.alpha ? 1 : 0;
        break;
      case TestKind::Lt:
        try {
          out.verdicts[t] = little(sample).p_value <= sc.alpha ? 1 : 0;
        } catch (const TooFewComplete&) {
          out.verdicts[t] = 2;  // excluded from the denominator
        }
        break;
      case TestKind::Nct:
        out.verdicts[t] = nct(sample).p_value <= sc.alpha ? 1 : 0;
        break;
    }
  }
  return out;
}

}  // namespace

RejectionRates run_scenario(const Scenario& sc, std::uint64_t n_sim,
                            const BootstrapConfig& cfg,
                            std::span<const TestKind> tests, int threads) {
  if (n_sim < 1) throw std::invalid_argument("n_sim must be at least 1");
  if (!(sc.alpha > 0.0 && sc.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (std::fabs(sc.rho) >= 1.0) {
    throw std::invalid_argument("|rho| must be below 1");
  }

  std::vector<TestKind> boot_kinds;
  for (TestKind k : tests) {
    if (is_bootstrap_kind(k)) boot_kinds.push_back(k);
  }

  RejectionRates rates;
  rates.tests.assign(tests.begin(), tests.end());
  rates.tallies.resize(tests.size());
  rates.n_sim = n_sim;
  rates.B = cfg.B;
  rates.seed = cfg.seed;

  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(n_sim)));
  std::atomic<std::uint64_t> next_run{0};
  std::mutex merge_mutex;
  std::exception_ptr failure;

  auto worker = [&]() {
    std::vector<TestTally> local(tests.size());
    try {
      for (;;) {
        const std::uint64_t run = next_run.fetch_add(1);
        if (run >= n_sim) break;
        const RunOutcome out =
            simulate_one_run(sc, cfg, tests, boot_kinds, run);
        for (std::size_t t = 0; t < tests.size(); ++t) {
          if (out.verdicts[t] == 2) continue;
          ++local[t].evaluated;
          local[t].rejected += out.verdicts[t];
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      return;
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t t = 0; t < tests.size(); ++t) {
      rates.tallies[t].rejected += local[t].rejected;
      rates.tallies[t].evaluated += local[t].evaluated;
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rates;
}

}  // namespace misspair
