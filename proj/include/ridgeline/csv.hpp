#ifndef RIDGELINE_CSV_HPP
#define RIDGELINE_CSV_HPP

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

namespace ridgeline {

// 17 significant decimal digits round-trip a 64-bit float exactly, and
// std::to_chars is locale-independent.
inline std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                         std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, ptr);
}

inline double parse_double_exact(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::runtime_error("parse_double_exact: bad float '" + std::string(text) + "'");
    return value;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
        out_ << header << '\n';
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        (write_field(fields, first), ...);
        out_ << '\n';
    }

    void flush() { out_.flush(); }

private:
    template <typename T>
    void write_field(const T& field, bool& first) {
        if (!first) out_ << ',';
        first = false;
        if constexpr (std::is_same_v<T, double>) {
            out_ << format_double(field);
        } else {
            out_ << field;
        }
    }

    std::ofstream out_;
};

} // namespace ridgeline

#endif
