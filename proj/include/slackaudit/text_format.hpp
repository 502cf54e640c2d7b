#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace slackaudit {

// Renders a double with 17 significant digits, enough to round-trip the
// exact bit pattern through decimal text.
std::string format_g17(double v);

// Parses the full string as a double; throws ValidationError otherwise.
double parse_double(const std::string& s, const std::string& what);

std::string trim(const std::string& s);

std::vector<std::string> split(const std::string& s, char sep);

// Plain `key = value` config files. Later keys override earlier ones;
// blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_kv_file(const std::string& path);

// FNV-1a over raw bytes.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed);

// splitmix64 step, used to derive per-module sub-seeds from one CLI seed.
std::uint64_t splitmix64(std::uint64_t x);

// Sub-seed for a named module, so all randomness flows from one root seed.
std::uint64_t derive_seed(std::uint64_t root, const std::string& label);

}  // namespace slackaudit
