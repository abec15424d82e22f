#include "misspair/scenario_config.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "misspair/errors.hpp"

namespace misspair {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ParseError(pointer + ": " + what);
}

double as_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) fail(pointer, "expected a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& pointer) {
  if (!j.is_string()) fail(pointer, "expected a string");
  return j.get<std::string>();
}

std::uint64_t as_count(const json& j, const std::string& pointer) {
  if (!j.is_number_unsigned()) fail(pointer, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

int as_size(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) fail(pointer, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < 1 || v > (1 << 30)) fail(pointer, "out of range");
  return static_cast<int>(v);
}

// Applies `leaf` to the value itself, or to each element of an array.
template <typename Leaf>
void scalar_or_array(const json& j, const std::string& pointer, Leaf leaf) {
  if (j.is_array()) {
    if (j.empty()) fail(pointer, "sweep axis must not be empty");
    for (std::size_t i = 0; i < j.size(); ++i) {
      leaf(j[i], pointer + "/" + std::to_string(i));
    }
  } else {
    leaf(j, pointer);
  }
}

MechanismSpec parse_mechanism(const json& j, const std::string& pointer) {
  if (!j.is_object()) fail(pointer, "expected an object");
  if (!j.contains("kind")) fail(pointer + "/kind", "missing");
  const std::string kind = as_string(j.at("kind"), pointer + "/kind");
  if (kind == "mcar") {
    if (!j.contains("n_c")) fail(pointer + "/n_c", "missing");
    if (!j.contains("n_u")) fail(pointer + "/n_u", "missing");
    const int n_c = as_size(j.at("n_c"), pointer + "/n_c");
    const int n_u = as_size(j.at("n_u"), pointer + "/n_u");
    if (n_c < 2) fail(pointer + "/n_c", "must be at least 2");
    return MechanismSpec::mcar(n_c, n_u);
  }
  if (kind == "mar") {
    if (!j.contains("n")) fail(pointer + "/n", "missing");
    const int n = as_size(j.at("n"), pointer + "/n");
    if (n < 6) fail(pointer + "/n", "must be at least 6");
    return MechanismSpec::mar(n);
  }
  fail(pointer + "/kind", "expected 'mcar' or 'mar'");
}

const json& require(const json& root, const char* key) {
  if (!root.contains(key)) {
    fail(std::string("/") + key, "missing required field");
  }
  return root.at(key);
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

SimulationConfig parse_simulation_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("", "expected a JSON object");

  SimulationConfig cfg;
  scalar_or_array(require(root, "distribution"), "/distribution",
                  [&](const json& j, const std::string& ptr) {
                    try {
                      cfg.distributions.push_back(
                          residual_dist_from_string(as_string(j, ptr)));
                    } catch (const std::invalid_argument& e) {
                      fail(ptr, e.what());
                    }
                  });
  scalar_or_array(require(root, "rho"), "/rho",
                  [&](const json& j, const std::string& ptr) {
                    const double rho = as_number(j, ptr);
                    if (std::fabs(rho) >= 1.0) fail(ptr, "|rho| must be < 1");
                    cfg.rhos.push_back(rho);
                  });
  scalar_or_array(require(root, "design"), "/design",
                  [&](const json& j, const std::string& ptr) {
                    try {
                      cfg.designs.push_back(
                          cov_design_from_string(as_string(j, ptr)));
                    } catch (const std::invalid_argument& e) {
                      fail(ptr, e.what());
                    }
                  });
  scalar_or_array(require(root, "mechanism"), "/mechanism",
                  [&](const json& j, const std::string& ptr) {
                    cfg.mechanisms.push_back(parse_mechanism(j, ptr));
                  });
  scalar_or_array(require(root, "delta"), "/delta",
                  [&](const json& j, const std::string& ptr) {
                    cfg.deltas.push_back(as_number(j, ptr));
                  });

  cfg.n_sim = as_count(require(root, "n_sim"), "/n_sim");
  if (cfg.n_sim == 0) fail("/n_sim", "must be at least 1");
  if (root.contains("alpha")) {
    cfg.alpha = as_number(root.at("alpha"), "/alpha");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
      fail("/alpha", "must lie in (0, 1)");
    }
  }
  if (root.contains("B")) {
    cfg.B = as_count(root.at("B"), "/B");
    if (cfg.B == 0) fail("/B", "must be at least 1");
  }
  if (root.contains("seed")) cfg.seed = as_count(root.at("seed"), "/seed");

  if (root.contains("tests")) {
    const json& tests = root.at("tests");
    if (!tests.is_array() || tests.empty()) {
      fail("/tests", "expected a nonempty array of test names");
    }
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const std::string ptr = "/tests/" + std::to_string(i);
      try {
        cfg.tests.push_back(test_kind_from_string(as_string(tests[i], ptr)));
      } catch (const std::invalid_argument& e) {
        fail(ptr, e.what());
      }
    }
  } else {
    cfg.tests = {TestKind::Wts, TestKind::Ats, TestKind::Mats, TestKind::Nct,
                 TestKind::Lt};
  }

  static const char* known[] = {"distribution", "rho",   "design", "mechanism",
                                "delta",        "alpha", "n_sim",  "B",
                                "seed",         "tests"};
  for (const auto& [key, value] : root.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail("/" + key, "unknown field");
  }
  return cfg;
}

void run_simulation_csv(const SimulationConfig& config, std::ostream& out,
                        int threads) {
  out << "distribution,rho,design,mechanism,n_c,n_u,n,delta,alpha,n_sim,B,"
         "test,rejection_rate,n_effective\n";

  std::uint64_t cell = 0;
  for (ResidualDist dist : config.distributions) {
    for (double rho : config.rhos) {
      for (CovDesign design : config.designs) {
        for (const MechanismSpec& mech : config.mechanisms) {
          for (double delta : config.deltas) {
            Scenario sc;
            sc.distribution = dist;
            sc.rho = rho;
            sc.design = design;
            sc.mechanism = mech;
            sc.delta = delta;
            sc.alpha = config.alpha;

            BootstrapConfig boot;
            boot.B = config.B;
            boot.seed = derive_seed(config.seed, stream_id::kSweepCell, cell);
            ++cell;

            const RejectionRates rates =
                run_scenario(sc, config.n_sim, boot, config.tests, threads);

            const bool mcar = mech.kind == MechanismSpec::Kind::Mcar;
            for (std::size_t t = 0; t < rates.tests.size(); ++t) {
              const TestTally& tally = rates.tallies[t];
              out << to_string(dist) << ',' << format_double(rho) << ','
                  << to_string(design) << ',' << (mcar ? "mcar" : "mar")
                  << ',';
              if (mcar) out << mech.n_c;
              out << ',';
              if (mcar) out << mech.n_u;
              out << ',' << mech.n << ',' << format_double(delta) << ','
                  << format_double(config.alpha) << ',' << config.n_sim << ','
                  << config.B << ',' << to_string(rates.tests[t]) << ',';
              if (tally.evaluated > 0) out << format_double(tally.rate());
              out << ',' << tally.evaluated << '\n';
            }
          }
        }
      }
    }
  }
}

}  // namespace misspair
