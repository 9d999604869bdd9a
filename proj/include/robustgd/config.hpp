#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace robustgd {

/// A small TOML subset: `[table]` headers, `key = value` lines, `#` comments.
/// Values are numbers, booleans, double-quoted strings, or single-line arrays
/// of those. Keys are addressed as "table.key" (top-level keys bare).
class Config {
public:
    struct Value {
        enum class Kind { Number, Boolean, String, Array };
        Kind kind = Kind::Number;
        std::string text;  // raw token for numbers, contents for strings
        double number = 0.0;
        bool boolean = false;
        std::vector<Value> items;
    };

    static Config parse(std::string_view text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::vector<std::string> keys() const;

    double number(const std::string& key, double fallback) const;
    std::int64_t integer(const std::string& key, std::int64_t fallback) const;
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::string string(const std::string& key, const std::string& fallback) const;
    /// A scalar is accepted as a one-element list.
    std::vector<double> numbers(const std::string& key) const;
    std::vector<std::string> strings(const std::string& key) const;

    void set(const std::string& key, Value value) { values_[key] = std::move(value); }

private:
    const Value& at(const std::string& key) const;
    std::map<std::string, Value> values_;
};

}  // namespace robustgd
