#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace slackaudit {

// One labeled individual: feature vector, group membership in {1,2},
// binary label.
struct Record {
    std::vector<double> features;
    int group = 0;
    int label = 0;
};

// Immutable after construction; construction validates that both groups
// are non-empty, labels are binary and feature dimensions agree.
class Dataset {
  public:
    explicit Dataset(std::vector<Record> records);

    std::size_t size() const { return records_.size(); }
    int dim() const { return dim_; }
    const Record& operator[](std::size_t i) const { return records_[i]; }
    const std::vector<Record>& records() const { return records_; }

    std::size_t group_size(int group) const;
    std::size_t group_positives(int group) const;

    // Content hash covering features, groups and labels; used to pin
    // policies and sweep reports to the exact data they were built on.
    std::uint64_t fingerprint() const;

  private:
    std::vector<Record> records_;
    int dim_ = 0;
    std::size_t group_size_[2] = {0, 0};
    std::size_t group_pos_[2] = {0, 0};
};

// Column mapping for CSV ingestion. Encodings map raw cell text onto the
// two group ids / binary labels; any other value is rejected.
struct CsvSchema {
    std::vector<std::string> feature_columns;
    std::string group_column = "group";
    std::string label_column = "label";
    std::map<std::string, int> group_encoding = {{"1", 1}, {"2", 2}};
    std::map<std::string, int> label_encoding = {{"0", 0}, {"1", 1}};
};

// Reads a comma-separated UTF-8 file with a header row. Fields are
// trimmed; no quoting dialect. Row order is preserved.
Dataset load_csv(const std::string& path, const CsvSchema& schema);
Dataset load_csv_stream(std::istream& in, const CsvSchema& schema);

// Writes `f0..f{d-1},group,label` with 17-significant-digit floats, the
// inverse of load_csv under the default schema.
void save_csv(const Dataset& dataset, std::ostream& out);
void save_csv(const Dataset& dataset, const std::string& path);

// Builds a CsvSchema from `key = value` pairs: features (comma list),
// group, label, group_values (value for group 1, value for group 2),
// label_values (value for 0, value for 1). Missing keys keep defaults.
CsvSchema schema_from_kv(const std::map<std::string, std::string>& kv);

// Deterministic label sequence with exactly round(n*p) ones spread evenly
// (first slot positive when p >= 0.5). Same inputs, same output.
std::vector<int> stratified_binary_sample(std::size_t n, double p);

// Synthetic dataset for smoke tests and the `gen random` command: uniform
// features, alternating groups, labels tilted by the first feature. Both
// groups are guaranteed a positive record.
Dataset make_random_dataset(std::uint64_t seed, std::size_t n, int dim);

}  // namespace slackaudit
