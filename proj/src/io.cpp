#include "cmera/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace cmera {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

bool needs_quoting(std::string_view field) {
    return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

csv_writer::csv_writer(const std::vector<std::string>& header)
    : columns_(header.size()) {
    if (header.empty())
        throw std::invalid_argument("csv_writer: header must not be empty");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        append_field(out_, header[i]);
    }
    out_ += '\n';
}

void csv_writer::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
        throw std::invalid_argument("csv_writer: row has " +
                                    std::to_string(fields.size()) +
                                    " fields, header has " +
                                    std::to_string(columns_));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ += ',';
        append_field(out_, fields[i]);
    }
    out_ += '\n';
}

void csv_writer::row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_double(v));
    row(fields);
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
    const std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("write_file_atomic: cannot open " +
                                     tmp.string());
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("write_file_atomic: short write to " +
                                     tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a_hash(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::string_view bytes) {
    const std::uint64_t h = fnv1a_hash(bytes);
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i)
        out[15 - i] = digits[(h >> (4 * i)) & 0xF];
    return out;
}

}  // namespace cmera
