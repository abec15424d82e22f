#ifndef MISSPAIR_SAMPLE_HPP
#define MISSPAIR_SAMPLE_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace misspair {

struct DataPair {
  double x1 = 0.0;
  double x2 = 0.0;
};

// One ingestion row: the second component may be absent.
struct RawRecord {
  double x1 = 0.0;
  std::optional<double> x2;
};

struct SampleCounts {
  int n_c = 0;  // complete pairs
  int n_u = 0;  // first-component-only observations
  int n = 0;    // subjects, n_c + n_u
  int N = 0;    // observations, 2*n_c + n_u
};

// Matched-pairs data where only the second component can be missing.
// Immutable after construction; construction validates every invariant
// (n_c >= 2, n_u >= 1, all values finite).
class IncompletePairedSample {
 public:
  IncompletePairedSample(std::vector<DataPair> complete,
                         std::vector<double> incomplete_first);

  // Partitions records by presence of x2, preserving input order within
  // each group. Throws NonFinite, TooFewComplete or NoIncomplete.
  static IncompletePairedSample from_records(std::span<const RawRecord> records);

  const std::vector<DataPair>& complete() const { return complete_; }
  const std::vector<double>& incomplete_first() const {
    return incomplete_first_;
  }

  int n_c() const { return static_cast<int>(complete_.size()); }
  int n_u() const { return static_cast<int>(incomplete_first_.size()); }
  int n() const { return n_c() + n_u(); }

 private:
  std::vector<DataPair> complete_;
  std::vector<double> incomplete_first_;
};

SampleCounts counts(const IncompletePairedSample& s);

// CSV contract: UTF-8, header row "x1,x2", '.' decimal point, an empty x2
// field denotes a missing second component.
std::vector<RawRecord> read_records_csv(std::istream& in);
IncompletePairedSample read_sample_csv(const std::filesystem::path& path);
void write_sample_csv(const IncompletePairedSample& s, std::ostream& out);

}  // namespace misspair

#endif  // MISSPAIR_SAMPLE_HPP
