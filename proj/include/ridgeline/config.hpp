#ifndef RIDGELINE_CONFIG_HPP
#define RIDGELINE_CONFIG_HPP

#include <charconv>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ridgeline {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace detail

// Flat `key = value` configuration with dot-namespaced keys. Values stay raw
// text until a typed accessor reads them; every accessor marks its key as
// consumed so a command can reject unknown (typo'd) keys afterwards.
class RunConfig {
public:
    static RunConfig parse(std::string_view text, const std::string& origin = "<config>") {
        RunConfig config;
        config.origin_ = origin;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                                   : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;

            const std::size_t hash = line.find('#');
            if (hash != std::string_view::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;

            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + std::string(line) + "'");
            const std::string key{detail::trim(line.substr(0, eq))};
            const std::string value{detail::trim(line.substr(eq + 1))};
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
            if (config.entries_.count(key))
                config.warnings_.push_back(origin + ":" + std::to_string(line_no) +
                                           ": duplicate key '" + key + "', last occurrence wins");
            config.entries_[key] = Entry{value, line_no};
        }
        return config;
    }

    // Command-line `--key=value` override; replaces any file value.
    void apply_override(const std::string& key, const std::string& value) {
        entries_[key] = Entry{value, 0};
    }

    std::string emit() const {
        std::string out;
        for (const auto& [key, entry] : entries_) {
            out += key;
            out += " = ";
            out += entry.value;
            out += '\n';
        }
        return out;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string require_string(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(origin_ + ": missing required key '" + key + "'");
        consumed_.insert(key);
        return it->second.value;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        consumed_.insert(key);
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

    double require_double(const std::string& key) const {
        return parse_double(key, require_string(key));
    }

    double get_double(const std::string& key, double fallback) const {
        consumed_.insert(key);
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : parse_double(key, it->second.value);
    }

    long long require_int(const std::string& key) const {
        return parse_int(key, require_string(key));
    }

    long long get_int(const std::string& key, long long fallback) const {
        consumed_.insert(key);
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : parse_int(key, it->second.value);
    }

    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const {
        consumed_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::uint64_t value = 0;
        const std::string& text = it->second.value;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw value_error(key, text);
        return value;
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
        consumed_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::vector<double> out;
        std::string_view rest = it->second.value;
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            const std::string_view item = detail::trim(rest.substr(0, comma));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            if (item.empty()) continue;
            out.push_back(parse_double(key, std::string(item)));
        }
        if (out.empty()) throw value_error(key, it->second.value);
        return out;
    }

    // Every key must have been read by some accessor; anything left over is a
    // typo or an option the command does not understand.
    void ensure_all_consumed() const {
        std::string unknown;
        for (const auto& [key, entry] : entries_) {
            if (consumed_.count(key)) continue;
            if (!unknown.empty()) unknown += ", ";
            unknown += "'" + key + "'";
            if (entry.line > 0) unknown += " (line " + std::to_string(entry.line) + ")";
        }
        if (!unknown.empty())
            throw ConfigError(origin_ + ": unknown keys: " + unknown);
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

    bool operator==(const RunConfig& other) const {
        if (entries_.size() != other.entries_.size()) return false;
        for (const auto& [key, entry] : entries_) {
            const auto it = other.entries_.find(key);
            if (it == other.entries_.end() || it->second.value != entry.value) return false;
        }
        return true;
    }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    ConfigError value_error(const std::string& key, const std::string& text) const {
        std::string where = origin_;
        const auto it = entries_.find(key);
        if (it != entries_.end() && it->second.line > 0)
            where += ":" + std::to_string(it->second.line);
        return ConfigError(where + ": key '" + key + "': cannot parse value '" + text + "'");
    }

    double parse_double(const std::string& key, const std::string& text) const {
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) throw value_error(key, text);
        return value;
    }

    long long parse_int(const std::string& key, const std::string& text) const {
        long long value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) throw value_error(key, text);
        return value;
    }

    std::string origin_;
    std::map<std::string, Entry> entries_;
    std::vector<std::string> warnings_;
    mutable std::set<std::string> consumed_;
};

} // namespace ridgeline

#endif
