#include "slackaudit/dataset.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "slackaudit/errors.hpp"
#include "slackaudit/text_format.hpp"

namespace slackaudit {

Dataset::Dataset(std::vector<Record> records) : records_(std::move(records)) {
    if (records_.empty()) throw ValidationError("dataset is empty");
    dim_ = static_cast<int>(records_[0].features.size());
    if (dim_ < 1) throw ValidationError("feature dimension must be >= 1");
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const Record& r = records_[i];
        if (r.group != 1 && r.group != 2)
            throw ValidationError("record " + std::to_string(i) + ": group must be 1 or 2");
        if (r.label != 0 && r.label != 1)
            throw ValidationError("record " + std::to_string(i) + ": label must be 0 or 1");
        if (static_cast<int>(r.features.size()) != dim_)
            throw ValidationError("record " + std::to_string(i) + ": feature dimension mismatch");
        group_size_[r.group - 1]++;
        group_pos_[r.group - 1] += r.label;
    }
    if (group_size_[0] == 0) throw ValidationError("group 1 is empty");
    if (group_size_[1] == 0) throw ValidationError("group 2 is empty");
}

std::size_t Dataset::group_size(int group) const {
    if (group != 1 && group != 2) throw ValidationError("group must be 1 or 2");
    return group_size_[group - 1];
}

std::size_t Dataset::group_positives(int group) const {
    if (group != 1 && group != 2) throw ValidationError("group must be 1 or 2");
    return group_pos_[group - 1];
}

std::uint64_t Dataset::fingerprint() const {
    std::uint64_t h = 0;
    for (const Record& r : records_) {
        for (double f : r.features) {
            std::uint64_t bits;
            std::memcpy(&bits, &f, sizeof(bits));
            h = fnv1a(&bits, sizeof(bits), h);
        }
        const unsigned char gl[2] = {static_cast<unsigned char>(r.group),
                                     static_cast<unsigned char>(r.label)};
        h = fnv1a(gl, 2, h);
    }
    return h;
}

namespace {

int decode(const std::map<std::string, int>& enc, const std::string& raw,
           const char* what, std::size_t row) {
    const auto it = enc.find(trim(raw));
    if (it == enc.end())
        throw ValidationError(std::string(what) + " value '" + trim(raw) + "' not in encoding (row " +
                              std::to_string(row) + ")");
    return it->second;
}

}  // namespace

Dataset load_csv_stream(std::istream& in, const CsvSchema& schema) {
    if (schema.feature_columns.empty())
        throw SchemaError("schema names no feature columns");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("csv has no header row");
    const std::vector<std::string> header = split(line, ',');
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;

    auto column = [&](const std::string& name) {
        const auto it = col.find(name);
        if (it == col.end()) throw SchemaError("column '" + name + "' not in header");
        return it->second;
    };
    std::vector<std::size_t> fcols;
    for (const std::string& c : schema.feature_columns) fcols.push_back(column(c));
    const std::size_t gcol = column(schema.group_column);
    const std::size_t lcol = column(schema.label_column);

    std::vector<Record> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != header.size())
            throw ValidationError("row " + std::to_string(row) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(cells.size()));
        Record r;
        for (std::size_t fc : fcols)
            r.features.push_back(parse_double(cells[fc], "row " + std::to_string(row)));
        r.group = decode(schema.group_encoding, cells[gcol], "group", row);
        r.label = decode(schema.label_encoding, cells[lcol], "label", row);
        records.push_back(std::move(r));
    }
    return Dataset(std::move(records));
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    return load_csv_stream(in, schema);
}

void save_csv(const Dataset& dataset, std::ostream& out) {
    for (int i = 0; i < dataset.dim(); ++i) out << "f" << i << ",";
    out << "group,label\n";
    for (const Record& r : dataset.records()) {
        for (double f : r.features) out << format_g17(f) << ",";
        out << r.group << "," << r.label << "\n";
    }
}

void save_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write: " + path);
    save_csv(dataset, out);
    if (!out) throw IoError("write failed: " + path);
}

CsvSchema schema_from_kv(const std::map<std::string, std::string>& kv) {
    CsvSchema s;
    if (auto it = kv.find("features"); it != kv.end()) {
        s.feature_columns.clear();
        for (const std::string& c : split(it->second, ','))
            if (!trim(c).empty()) s.feature_columns.push_back(trim(c));
    }
    if (auto it = kv.find("group"); it != kv.end()) s.group_column = it->second;
    if (auto it = kv.find("label"); it != kv.end()) s.label_column = it->second;
    if (auto it = kv.find("group_values"); it != kv.end()) {
        const auto vals = split(it->second, ',');
        if (vals.size() != 2) throw ValidationError("group_values needs exactly 2 entries");
        s.group_encoding = {{trim(vals[0]), 1}, {trim(vals[1]), 2}};
    }
    if (auto it = kv.find("label_values"); it != kv.end()) {
        const auto vals = split(it->second, ',');
        if (vals.size() != 2) throw ValidationError("label_values needs exactly 2 entries");
        s.label_encoding = {{trim(vals[0]), 0}, {trim(vals[1]), 1}};
    }
    return s;
}

std::vector<int> stratified_binary_sample(std::size_t n, double p) {
    if (n < 1) throw SizeError("stratified_binary_sample: n must be >= 1");
    if (p < 0.0 || p > 1.0) throw ValidationError("stratified_binary_sample: p must be in [0,1]");
    const auto k = static_cast<unsigned long long>(std::llround(static_cast<double>(n) * p));
    // Integer midpoint pattern: slot i is positive where (2ik + n) / (2n)
    // steps up. Places exactly k ones, first slot positive when 2k >= n.
    std::vector<int> out(n);
    unsigned long long prev = 0;  // (2*0*k + n) / (2n)
    for (std::size_t i = 1; i <= n; ++i) {
        const unsigned long long cur = (2 * i * k + n) / (2 * n);
        out[i - 1] = cur > prev ? 1 : 0;
        prev = cur;
    }
    return out;
}

Dataset make_random_dataset(std::uint64_t seed, std::size_t n, int dim) {
    if (n < 2) throw SizeError("make_random_dataset: n must be >= 2");
    if (dim < 1) throw SizeError("make_random_dataset: dim must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Record> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Record r;
        for (int j = 0; j < dim; ++j) r.features.push_back(unif(rng));
        r.group = 1 + static_cast<int>(i % 2);
        r.label = unif(rng) < 0.3 + 0.4 * r.features[0] ? 1 : 0;
        records.push_back(std::move(r));
    }
    for (int g = 1; g <= 2; ++g) {
        bool has_pos = false;
        for (const Record& r : records) has_pos |= (r.group == g && r.label == 1);
        if (!has_pos)
            for (Record& r : records)
                if (r.group == g) { r.label = 1; break; }
    }
    return Dataset(std::move(records));
}

}  // namespace slackaudit
