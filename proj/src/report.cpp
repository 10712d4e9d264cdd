#include "orderforge/report.hpp"

#include <cstdio>
#include <fstream>

#include "orderforge/errors.hpp"

namespace orderforge {

std::string Report::format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void Report::kv(std::string_view key, std::string_view value) {
    text_.append(key);
    text_.push_back('=');
    text_.append(value);
    text_.push_back('\n');
}

void Report::kv(std::string_view key, std::uint64_t value) {
    kv(key, std::string_view{std::to_string(value)});
}

void Report::kv(std::string_view key, std::int64_t value) {
    kv(key, std::string_view{std::to_string(value)});
}

void Report::kv(std::string_view key, double value) {
    kv(key, std::string_view{format_double(value)});
}

void Report::tsv_row(const std::string& joined) {
    text_.append(joined);
    text_.push_back('\n');
}

void Report::line(std::string_view raw) {
    text_.append(raw);
    text_.push_back('\n');
}

void Report::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text_;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace orderforge
