// misspair: equality-of-means tests for matched pairs with second-arm
// missingness, plus the Monte Carlo simulation driver.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "misspair/bootstrap.hpp"
#include "misspair/errors.hpp"
#include "misspair/sample.hpp"
#include "misspair/scenario_config.hpp"
#include "misspair/statistics.hpp"

namespace {

using misspair::TestKind;
using misspair::TestResult;

std::string format_double(double v, int precision = 10) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::vector<TestKind> parse_test_list(const std::string& csv) {
  std::vector<TestKind> kinds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) kinds.push_back(misspair::test_kind_from_string(item));
  }
  if (kinds.empty()) {
    throw std::invalid_argument("--tests must name at least one test");
  }
  return kinds;
}

nlohmann::json detail_to_json(const misspair::TestDetail& detail) {
  nlohmann::json j = nlohmann::json::object();
  if (const auto* b = std::get_if<misspair::BootstrapDetail>(&detail)) {
    j["B"] = b->B;
    j["exceed_count"] = b->exceed_count;
    if (b->degenerate > 0) j["degenerate"] = b->degenerate;
  } else if (const auto* n = std::get_if<misspair::NctDetail>(&detail)) {
    j["t_s"] = n->t_s;
    j["t_m"] = n->t_m;
    j["variance"] = n->variance;
    j["z"] = n->z;
  } else if (const auto* l = std::get_if<misspair::LtDetail>(&detail)) {
    j["numerator"] = l->numerator;
    j["sigma_lt"] = l->sigma_lt;
    j["dof"] = l->dof;
  }
  return j;
}

int cmd_test(const std::string& input, const std::string& tests_csv,
             std::uint64_t B, std::uint64_t seed, double alpha, bool json) {
  const std::vector<TestKind> kinds = parse_test_list(tests_csv);
  const misspair::IncompletePairedSample sample =
      misspair::read_sample_csv(input);

  std::vector<TestKind> boot_kinds;
  for (TestKind k : kinds) {
    if (misspair::is_bootstrap_kind(k)) boot_kinds.push_back(k);
  }
  misspair::BootstrapConfig cfg;
  cfg.B = B;
  cfg.seed = seed;
  std::vector<misspair::BootstrapResult> boot;
  if (!boot_kinds.empty()) {
    boot = misspair::bootstrap_p_multi(sample, boot_kinds, cfg);
  }

  std::vector<TestResult> results;
  std::size_t boot_index = 0;
  for (TestKind k : kinds) {
    if (misspair::is_bootstrap_kind(k)) {
      const misspair::BootstrapResult& b = boot[boot_index++];
      TestResult r;
      r.kind = k;
      r.statistic = b.observed;
      r.p_value = b.p_value;
      r.detail = misspair::BootstrapDetail{b.B, b.exceed_count, b.degenerate};
      results.push_back(r);
    } else if (k == TestKind::Lt) {
      results.push_back(misspair::little(sample));
    } else {
      results.push_back(misspair::nct(sample));
    }
  }

  if (json) {
    for (const TestResult& r : results) {
      nlohmann::json line;
      line["kind"] = std::string(misspair::to_string(r.kind));
      line["statistic"] = r.statistic;
      line["p_value"] = r.p_value;
      line["detail"] = detail_to_json(r.detail);
      std::cout << line.dump() << '\n';
    }
    return 0;
  }

  const auto c = misspair::counts(sample);
  std::cout << "sample: n_c=" << c.n_c << " n_u=" << c.n_u << " n=" << c.n
            << " N=" << c.N << "\n";
  std::cout << "test      statistic     p_value      decision(alpha="
            << format_double(alpha, 6) << ")\n";
  for (const TestResult& r : results) {
    std::string name(misspair::to_string(r.kind));
    name.resize(8, ' ');
    std::string stat = format_double(r.statistic, 6);
    stat.resize(std::max<std::size_t>(stat.size(), 12), ' ');
    std::string p = format_double(r.p_value, 6);
    p.resize(std::max<std::size_t>(p.size(), 11), ' ');
    std::cout << name << "  " << stat << "  " << p << "  "
              << (r.p_value <= alpha ? "reject" : "accept") << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& output,
                 int threads) {
  std::ifstream in(config_path);
  if (!in) {
    throw misspair::ParseError("cannot open '" + config_path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const misspair::SimulationConfig config =
      misspair::parse_simulation_config(buffer.str());

  std::ofstream out(output, std::ios::binary);
  if (!out) {
    throw misspair::ParseError("cannot write '" + output + "'");
  }
  misspair::run_simulation_csv(config, out, threads);
  return 0;
}

std::vector<double> parse_pvalue_list(const std::string& text) {
  std::vector<double> values;
  std::string token;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r') {
      if (!token.empty()) {
        double v = 0.0;
        const auto [ptr, ec] =
            std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
          throw misspair::ParseError("unparseable p-value '" + token + "'");
        }
        values.push_back(v);
        token.clear();
      }
    } else {
      token.push_back(ch);
    }
  }
  return values;
}

int cmd_adjust(const std::string& inline_values, const std::string& input) {
  std::vector<double> p;
  if (!inline_values.empty()) {
    p = parse_pvalue_list(inline_values);
  } else {
    std::ifstream in(input);
    if (!in) throw misspair::ParseError("cannot open '" + input + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    p = parse_pvalue_list(buffer.str());
  }
  if (p.empty()) throw misspair::ParseError("no p-values given");
  const std::vector<double> adjusted = misspair::holm_adjust(p);
  for (std::size_t i = 0; i < adjusted.size(); ++i) {
    std::cout << format_double(adjusted[i]) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-equality tests for matched pairs with missingness in one arm"};
  app.require_subcommand(1);

  auto* test = app.add_subcommand("test", "Run tests on a CSV data file");
  std::string input;
  std::string tests_csv = "wts,ats,mats,lt,nct";
  std::uint64_t B = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  bool json = false;
  test->add_option("--input", input, "CSV file with header x1,x2")->required();
  test->add_option("--tests", tests_csv, "Comma-separated test names");
  test->add_option("--B", B, "Bootstrap replications");
  test->add_option("--seed", seed, "RNG seed");
  test->add_option("--alpha", alpha, "Significance level");
  test->add_flag("--json", json, "Emit one JSON line per test result");

  auto* simulate =
      app.add_subcommand("simulate", "Run a Monte Carlo scenario grid");
  std::string config_path, output;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  simulate->add_option("--config", config_path, "JSON scenario grid")
      ->required();
  simulate->add_option("--output", output, "CSV output path")->required();
  simulate->add_option("--threads", threads, "Worker thread count");

  auto* adjust =
      app.add_subcommand("adjust", "Holm step-down p-value adjustment");
  std::string pvalues, pfile;
  adjust->add_option("--pvalues", pvalues, "Comma-separated p-values");
  adjust->add_option("--input", pfile, "File of whitespace-separated p-values");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(test)) {
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("--alpha must lie in (0, 1)");
      }
      return cmd_test(input, tests_csv, B, seed, alpha, json);
    }
    if (app.got_subcommand(simulate)) {
      if (threads < 1) throw std::invalid_argument("--threads must be >= 1");
      return cmd_simulate(config_path, output, threads);
    }
    if (app.got_subcommand(adjust)) {
      if (pvalues.empty() == pfile.empty()) {
        throw std::invalid_argument(
            "adjust needs exactly one of --pvalues or --input");
      }
      return cmd_adjust(pvalues, pfile);
    }
  } catch (const std::exception& e) {
    std::cerr << "misspair: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
