// Deterministic serialization: shortest round-trip decimal formatting,
// locale-free CSV assembly, atomic file replacement, and a stable content
// hash for cache keys.  Identical inputs produce byte-identical artifacts,
// so cached and freshly computed outputs are indistinguishable.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cmera {

// Version stamp carried by every artifact (tables and reports).
inline constexpr int schema_version = 1;

// Shortest decimal string that parses back to exactly the same double.
// Always uses '.' as the decimal mark; nan/inf spelled as such.
std::string format_double(double v);

// Comma-separated table with a fixed header row, "\n" line ends, and
// RFC-style quoting ("" escapes) for fields containing commas, quotes, or
// newlines.  Numeric rows go through format_double.
class csv_writer {
public:
    explicit csv_writer(const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    void row(const std::vector<double>& values);
    const std::string& str() const { return out_; }

private:
    std::size_t columns_;
    std::string out_;
};

// Writes content to path through a temporary sibling file and an atomic
// rename, creating parent directories as needed: concurrent readers never
// observe a partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// 64-bit FNV-1a over the bytes.
std::uint64_t fnv1a_hash(std::string_view bytes);

// Hash rendered as 16 lowercase hex digits (cache-key and manifest form).
std::string hash_hex(std::string_view bytes);

}  // namespace cmera
