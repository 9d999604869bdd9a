#include "robustgd/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace robustgd {

namespace {

using Value = Config::Value;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    }
    return true;
}

class ValueParser {
public:
    ValueParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    Value parse_all() {
        Value v = parse_value();
        skip_space();
        if (pos_ != text_.size()) fail(line_, "trailing characters after value");
        return v;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Value parse_value() {
        skip_space();
        if (pos_ >= text_.size()) fail(line_, "missing value");
        const char c = text_[pos_];
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        return parse_scalar();
    }

    Value parse_string() {
        Value v;
        v.kind = Value::Kind::String;
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_++];
            if (c == '\\' && pos_ < text_.size()) {
                const char e = text_[pos_++];
                c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
            }
            v.text.push_back(c);
        }
        if (pos_ >= text_.size()) fail(line_, "unterminated string");
        ++pos_;
        return v;
    }

    Value parse_array() {
        Value v;
        v.kind = Value::Kind::Array;
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.items.push_back(parse_value());
            skip_space();
            if (pos_ >= text_.size()) fail(line_, "unterminated array");
            if (text_[pos_] == ',') {
                ++pos_;
                skip_space();
                if (pos_ < text_.size() && text_[pos_] == ']') {
                    ++pos_;
                    return v;
                }
                continue;
            }
            if (text_[pos_] == ']') {
                ++pos_;
                return v;
            }
            fail(line_, "expected ',' or ']' in array");
        }
    }

    Value parse_scalar() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        const std::string_view tok = text_.substr(start, pos_ - start);
        Value v;
        if (tok == "true" || tok == "false") {
            v.kind = Value::Kind::Boolean;
            v.boolean = tok == "true";
            v.text = std::string(tok);
            return v;
        }
        std::string cleaned;
        for (char c : tok) {
            if (c != '_') cleaned.push_back(c);
        }
        const char* first = cleaned.data();
        if (!cleaned.empty() && cleaned.front() == '+') ++first;
        const auto res = std::from_chars(first, cleaned.data() + cleaned.size(), v.number);
        if (cleaned.empty() || res.ec != std::errc() || res.ptr != cleaned.data() + cleaned.size()) {
            fail(line_, "cannot parse value '" + std::string(tok) + "'");
        }
        v.kind = Value::Kind::Number;
        v.text = cleaned;
        return v;
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

const char* kind_name(Value::Kind k) {
    switch (k) {
        case Value::Kind::Number: return "number";
        case Value::Kind::Boolean: return "boolean";
        case Value::Kind::String: return "string";
        case Value::Kind::Array: return "array";
    }
    return "value";
}

void expect(const std::string& key, const Value& v, Value::Kind kind) {
    if (v.kind != kind) {
        throw std::runtime_error("config key '" + key + "' must be a " + kind_name(kind) + ", got " +
                                 kind_name(v.kind));
    }
}

}  // namespace

Config Config::parse(std::string_view text) {
    Config cfg;
    std::string table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed table header");
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (!valid_key(name)) fail(line_no, "invalid table name");
            table = std::string(name);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        if (!valid_key(key)) fail(line_no, "invalid key '" + std::string(key) + "'");
        const std::string full = table.empty() ? std::string(key) : table + "." + std::string(key);
        if (cfg.has(full)) fail(line_no, "duplicate key '" + full + "'");
        cfg.values_[full] = ValueParser(trim(line.substr(eq + 1)), line_no).parse_all();
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : values_) out.push_back(k);
    return out;
}

const Value& Config::at(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("missing config key '" + key + "'");
    return it->second;
}

double Config::number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    expect(key, v, Value::Kind::Number);
    return v.number;
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    expect(key, v, Value::Kind::Number);
    std::int64_t out = 0;
    const auto res = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
    if (res.ec != std::errc() || res.ptr != v.text.data() + v.text.size()) {
        throw std::runtime_error("config key '" + key + "' must be an integer");
    }
    return out;
}

std::uint64_t Config::unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    expect(key, v, Value::Kind::Number);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
    if (res.ec != std::errc() || res.ptr != v.text.data() + v.text.size()) {
        throw std::runtime_error("config key '" + key + "' must be a nonnegative integer");
    }
    return out;
}

bool Config::boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    expect(key, v, Value::Kind::Boolean);
    return v.boolean;
}

std::string Config::string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    expect(key, v, Value::Kind::String);
    return v.text;
}

std::vector<double> Config::numbers(const std::string& key) const {
    if (!has(key)) return {};
    const Value& v = at(key);
    if (v.kind == Value::Kind::Number) return {v.number};
    expect(key, v, Value::Kind::Array);
    std::vector<double> out;
    for (const auto& item : v.items) {
        expect(key, item, Value::Kind::Number);
        out.push_back(item.number);
    }
    return out;
}

std::vector<std::string> Config::strings(const std::string& key) const {
    if (!has(key)) return {};
    const Value& v = at(key);
    if (v.kind == Value::Kind::String) return {v.text};
    expect(key, v, Value::Kind::Array);
    std::vector<std::string> out;
    for (const auto& item : v.items) {
        expect(key, item, Value::Kind::String);
        out.push_back(item.text);
    }
    return out;
}

}  // namespace robustgd
