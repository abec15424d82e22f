#include <cmath>
#include <vector>

#include <doctest.h>

#include "misspair/bootstrap.hpp"
#include "misspair/errors.hpp"
#include "misspair/estimate.hpp"
#include "misspair/simulate.hpp"
#include "support/checks.hpp"

using namespace misspair;

TEST_SUITE("bootstrap") {

TEST_CASE("resample_once: counts and determinism") {
  const Sym2 identity{1, 0, 1};
  RandomStream a = RandomStream::keyed(11, 950);
  const auto s = resample_once(identity, 10, 5, a);
  CHECK(s.n_c() == 10);
  CHECK(s.n_u() == 5);

  RandomStream b1 = RandomStream::keyed(12, 951);
  RandomStream b2 = RandomStream::keyed(12, 951);
  const auto r1 = resample_once(identity, 6, 3, b1);
  const auto r2 = resample_once(identity, 6, 3, b2);
  for (int i = 0; i < 6; ++i) {
    CHECK(r1.complete()[i].x1 == r2.complete()[i].x1);
    CHECK(r1.complete()[i].x2 == r2.complete()[i].x2);
  }
  for (int i = 0; i < 3; ++i) {
    CHECK(r1.incomplete_first()[i] == r2.incomplete_first()[i]);
  }
}

TEST_CASE("resample_once: identity covariance leaves components uncorrelated") {
  const Sym2 identity{1, 0, 1};
  RandomStream rng = RandomStream::keyed(13, 952);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  long n = 0;
  while (n < 100000) {
    const auto s = resample_once(identity, 10, 5, rng);
    for (const DataPair& p : s.complete()) {
      sx += p.x1;
      sy += p.x2;
      sxx += p.x1 * p.x1;
      syy += p.x2 * p.x2;
      sxy += p.x1 * p.x2;
      ++n;
    }
  }
  const double mx = sx / n, my = sy / n;
  const double r = (sxy / n - mx * my) /
                   std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
  CHECK(std::fabs(r) < 0.05);
}

TEST_CASE("resample_once: fixture gamma reproduces the clamped correlation") {
  const Sym2 gamma = gamma_hat(moments(checks::fixture_d0()));
  RandomStream rng = RandomStream::keyed(14, 953);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  long n = 0;
  while (n < 100000) {
    const auto s = resample_once(gamma, 3, 2, rng);
    for (const DataPair& p : s.complete()) {
      sx += p.x1;
      sy += p.x2;
      sxx += p.x1 * p.x1;
      syy += p.x2 * p.x2;
      sxy += p.x1 * p.x2;
      ++n;
    }
  }
  const double mx = sx / n, my = sy / n;
  const double r = (sxy / n - mx * my) /
                   std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
  CHECK(std::fabs(r - 0.944911 * (1.0 - 1e-8)) < 0.01);
}

TEST_CASE("bootstrap_p: exact null point gives p = 1") {
  const IncompletePairedSample s({{1, 0}, {3, 4}}, {2, 2});
  BootstrapConfig cfg;
  cfg.B = 200;
  cfg.seed = 5;
  for (TestKind k : {TestKind::Wts, TestKind::Ats, TestKind::Mats}) {
    const BootstrapResult r = bootstrap_p(s, k, cfg);
    CHECK(r.observed == doctest::Approx(0.0));
    CHECK(r.p_value == 1.0);
    CHECK(r.exceed_count == r.B);
  }
}

TEST_CASE("bootstrap_p: B = 1 yields a two-point p-value") {
  BootstrapConfig cfg;
  cfg.B = 1;
  cfg.seed = 99;
  const BootstrapResult r =
      bootstrap_p(checks::fixture_d0(), TestKind::Ats, cfg);
  CHECK((r.p_value == 0.0 || r.p_value == 1.0));
}

TEST_CASE("bootstrap_p: only quadratic-form kinds are accepted") {
  BootstrapConfig cfg;
  CHECK_THROWS_AS(bootstrap_p(checks::fixture_d0(), TestKind::Nct, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_p(checks::fixture_d0(), TestKind::Lt, cfg),
                  std::invalid_argument);
}

TEST_CASE("bootstrap_p: self-consistency between seeds and sizes") {
  BootstrapConfig small;
  small.B = 1000;
  small.seed = 42;
  const BootstrapResult a =
      bootstrap_p(checks::fixture_d0(), TestKind::Ats, small);

  BootstrapConfig big;
  big.B = 100000;
  big.seed = 43;
  const BootstrapResult b =
      bootstrap_p(checks::fixture_d0(), TestKind::Ats, big);

  CHECK(std::fabs(a.p_value - b.p_value) < 0.04);
}

TEST_CASE("bootstrap_p_multi matches the single-kind path bit for bit") {
  RandomStream rng = RandomStream::keyed(15, 954);
  const auto s = checks::random_sample(rng, 12, 6);
  BootstrapConfig cfg;
  cfg.B = 400;
  cfg.seed = 77;

  const TestKind kinds[3] = {TestKind::Wts, TestKind::Ats, TestKind::Mats};
  const auto multi = bootstrap_p_multi(s, kinds, cfg);
  for (int i = 0; i < 3; ++i) {
    const BootstrapResult single = bootstrap_p(s, kinds[i], cfg);
    CHECK(multi[i].observed == single.observed);
    CHECK(multi[i].exceed_count == single.exceed_count);
    CHECK(multi[i].p_value == single.p_value);
  }
}

TEST_CASE("bootstrap_p is reproducible") {
  RandomStream rng = RandomStream::keyed(16, 955);
  const auto s = checks::random_sample(rng, 10, 4);
  BootstrapConfig cfg;
  cfg.B = 500;
  cfg.seed = 31337;
  const BootstrapResult a = bootstrap_p(s, TestKind::Wts, cfg);
  const BootstrapResult b = bootstrap_p(s, TestKind::Wts, cfg);
  CHECK(a.observed == b.observed);
  CHECK(a.exceed_count == b.exceed_count);
  CHECK(a.p_value == b.p_value);
}

TEST_CASE("bootstrap_test wraps the p-value with a rejection rule") {
  BootstrapConfig cfg;
  cfg.B = 300;
  cfg.seed = 6;
  const TestResult r = bootstrap_test(checks::fixture_d0(), TestKind::Wts, cfg, 0.05);
  CHECK(r.kind == TestKind::Wts);
  const auto& d = std::get<BootstrapDetail>(r.detail);
  CHECK(d.B == 300);
  CHECK(r.p_value ==
        static_cast<double>(d.exceed_count) / static_cast<double>(d.B));
  CHECK(rejects(TestResult{TestKind::Wts, 1.0, 0.03, {}}, 0.05));
  CHECK(rejects(TestResult{TestKind::Wts, 1.0, 0.05, {}}, 0.05));  // p == alpha
  CHECK(!rejects(TestResult{TestKind::Wts, 1.0, 0.051, {}}, 0.05));

  CHECK_THROWS_AS(bootstrap_test(checks::fixture_d0(), TestKind::Wts, cfg, 1.0),
                  std::invalid_argument);
}

TEST_CASE("mar-rule mechanism produces valid samples and stays reproducible") {
  RandomStream rng = RandomStream::keyed(17, 956);
  const auto s = checks::random_sample(rng, 14, 6);
  BootstrapConfig cfg;
  cfg.B = 200;
  cfg.seed = 404;
  cfg.mechanism = BootstrapMechanism::MarRule;
  const BootstrapResult a = bootstrap_p(s, TestKind::Ats, cfg);
  const BootstrapResult b = bootstrap_p(s, TestKind::Ats, cfg);
  CHECK(a.exceed_count == b.exceed_count);
  CHECK(a.p_value >= 0.0);
  CHECK(a.p_value <= 1.0);
}

// Bootstrap draws track the real null distribution of the statistic
// (the distributional-equivalence check at large balanced sizes).
TEST_CASE("bootstrap ATS distribution matches the real null distribution") {
  Scenario sc;
  sc.distribution = ResidualDist::Normal;
  sc.rho = 0.5;
  sc.design = CovDesign::Homoscedastic;
  sc.delta = 0.0;

  const int n = 2000;  // n_c = n_u = 1000
  RandomStream data = RandomStream::keyed(18, 957);
  RandomStream miss = RandomStream::keyed(18, 958);
  const auto pairs = gen_complete(sc, n, data);
  const auto sample = impose_mcar(pairs, n / 2, miss);

  // 1000 bootstrap draws of the statistic from the fitted model.
  const MomentEstimates m = moments(sample);
  const Sym2 gamma = gamma_hat(m);
  std::vector<double> boot_draws;
  boot_draws.reserve(1000);
  for (int b = 0; b < 1000; ++b) {
    RandomStream stream = RandomStream::keyed(19, 959, b);
    const auto star = resample_once(gamma, 1000, 1000, stream);
    const MomentEstimates ms = moments(star);
    boot_draws.push_back(ats(contrast(star, ms), sigma_hat(ms)));
  }

  // 1000 independent real-data statistics under the null.
  std::vector<double> real_draws;
  real_draws.reserve(1000);
  for (int r = 0; r < 1000; ++r) {
    RandomStream d = RandomStream::keyed(20, 960, r);
    RandomStream mi = RandomStream::keyed(20, 961, r);
    const auto p = gen_complete(sc, n, d);
    const auto smp = impose_mcar(p, n / 2, mi);
    const MomentEstimates mm = moments(smp);
    real_draws.push_back(ats(contrast(smp, mm), sigma_hat(mm)));
  }

  CHECK(checks::ks_two_sample(boot_draws, real_draws) < 0.07);
}

}  // TEST_SUITE
