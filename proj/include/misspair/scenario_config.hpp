#ifndef MISSPAIR_SCENARIO_CONFIG_HPP
#define MISSPAIR_SCENARIO_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "misspair/simulate.hpp"

namespace misspair {

// A simulation grid parsed from JSON. distribution, rho, design, mechanism
// and delta accept either a scalar or an array; arrays are sweep axes and
// cells are enumerated in row-major order over
// (distribution, rho, design, mechanism, delta).
struct SimulationConfig {
  std::vector<ResidualDist> distributions;
  std::vector<double> rhos;
  std::vector<CovDesign> designs;
  std::vector<MechanismSpec> mechanisms;
  std::vector<double> deltas;
  double alpha = 0.05;
  std::uint64_t n_sim = 0;  // required, no default
  std::uint64_t B = 1000;
  std::uint64_t seed = 0;
  std::vector<TestKind> tests;
};

// Throws ParseError with a JSON-pointer diagnostic on schema violations.
SimulationConfig parse_simulation_config(const std::string& json_text);

// Runs every cell of the grid (each with a seed derived from the config seed
// and the cell index) and writes long-format CSV rows, one per cell and test.
// Byte-identical output for identical configs, independent of thread count.
void run_simulation_csv(const SimulationConfig& config, std::ostream& out,
                        int threads = 1);

}  // namespace misspair

#endif  // MISSPAIR_SCENARIO_CONFIG_HPP
