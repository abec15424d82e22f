#include "misspair/sample.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "misspair/errors.hpp"

namespace misspair {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NonFinite(std::string("non-finite ") + what);
  }
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Strict double parse of a whole field; rejects empties, trailing bytes,
// inf/nan spellings and locale-dependent separators.
std::optional<double> parse_field(std::string_view field) {
  if (field.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("unparseable numeric field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

IncompletePairedSample::IncompletePairedSample(
    std::vector<DataPair> complete, std::vector<double> incomplete_first)
    : complete_(std::move(complete)),
      incomplete_first_(std::move(incomplete_first)) {
  for (const DataPair& p : complete_) {
    require_finite(p.x1, "first component");
    require_finite(p.x2, "second component");
  }
  for (double v : incomplete_first_) require_finite(v, "first component");
  if (n_c() < 2) {
    throw TooFewComplete("need at least 2 complete pairs, got " +
                         std::to_string(n_c()));
  }
  if (n_u() < 1) {
    throw NoIncomplete(
        "no incomplete observations; use a plain paired test instead");
  }
}

IncompletePairedSample IncompletePairedSample::from_records(
    std::span<const RawRecord> records) {
  std::vector<DataPair> complete;
  std::vector<double> incomplete_first;
  for (const RawRecord& r : records) {
    require_finite(r.x1, "first component");
    if (r.x2.has_value()) {
      require_finite(*r.x2, "second component");
      complete.push_back({r.x1, *r.x2});
    } else {
      incomplete_first.push_back(r.x1);
    }
  }
  return IncompletePairedSample(std::move(complete),
                                std::move(incomplete_first));
}

SampleCounts counts(const IncompletePairedSample& s) {
  SampleCounts c;
  c.n_c = s.n_c();
  c.n_u = s.n_u();
  c.n = s.n();
  c.N = 2 * s.n_c() + s.n_u();
  return c;
}

std::vector<RawRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty input, expected header row 'x1,x2'");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x1,x2") {
    throw ParseError("row 1: expected header 'x1,x2', got '" + line + "'");
  }

  std::vector<RawRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("row " + std::to_string(row) +
                       ": expected two comma-separated fields");
    }
    const std::string_view f1 = std::string_view(line).substr(0, comma);
    const std::string_view f2 = std::string_view(line).substr(comma + 1);
    if (f2.find(',') != std::string_view::npos) {
      throw ParseError("row " + std::to_string(row) + ": too many fields");
    }
    try {
      const auto x1 = parse_field(f1);
      const auto x2 = parse_field(f2);
      if (!x1.has_value()) {
        throw MissingFirstComponent(
            "first component absent (only the second arm may be missing)");
      }
      require_finite(*x1, "first component");
      if (x2.has_value()) require_finite(*x2, "second component");
      records.push_back({*x1, x2});
    } catch (const MissingFirstComponent& e) {
      throw MissingFirstComponent("row " + std::to_string(row) + ": " +
                                  e.what());
    } catch (const NonFinite& e) {
      throw NonFinite("row " + std::to_string(row) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("row " + std::to_string(row) + ": " + e.what());
    }
  }
  return records;
}

IncompletePairedSample read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'");
  }
  const auto records = read_records_csv(in);
  return IncompletePairedSample::from_records(records);
}

void write_sample_csv(const IncompletePairedSample& s, std::ostream& out) {
  out << "x1,x2\n";
  for (const DataPair& p : s.complete()) {
    out << format_double(p.x1) << ',' << format_double(p.x2) << '\n';
  }
  for (double v : s.incomplete_first()) {
    out << format_double(v) << ",\n";
  }
}

}  // namespace misspair
