#ifndef ORDERFORGE_REPORT_HPP
#define ORDERFORGE_REPORT_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace orderforge {

// Line-oriented report: `key=value` lines plus TSV blocks. All numeric
// formatting goes through here so identical runs emit identical bytes.
class Report {
public:
    void kv(std::string_view key, std::string_view value);
    void kv(std::string_view key, std::uint64_t value);
    void kv(std::string_view key, std::int64_t value);
    void kv(std::string_view key, int value) { kv(key, static_cast<std::int64_t>(value)); }
    void kv(std::string_view key, double value);
    void kv(std::string_view key, bool value) { kv(key, std::uint64_t{value ? 1u : 0u}); }
    void tsv_row(const std::string& joined);  // cells already tab-joined
    void line(std::string_view raw);

    const std::string& text() const { return text_; }
    void write_file(const std::string& path) const;

    static std::string format_double(double value);

private:
    std::string text_;
};

}  // namespace orderforge

#endif
