#include "remdyn/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "remdyn/params.hpp"

namespace remdyn {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw validation_error("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Remove a trailing comment, ignoring # inside quoted strings.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (c == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

TomlValue parse_scalar(const std::string& raw, std::size_t line) {
    TomlValue v;
    if (raw.empty()) fail(line, "empty value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
        v.type = TomlValue::Type::Str;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                const char next = raw[i + 1];
                if (next == '"' || next == '\\') {
                    v.s.push_back(next);
                    ++i;
                    continue;
                }
            }
            v.s.push_back(raw[i]);
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = TomlValue::Type::Bool;
        v.b = (raw == "true");
        return v;
    }
    const bool looks_float = raw.find_first_of(".eE") != std::string::npos ||
                             raw.find("inf") != std::string::npos ||
                             raw.find("nan") != std::string::npos;
    errno = 0;
    char* end = nullptr;
    if (!looks_float) {
        const long long iv = std::strtoll(raw.c_str(), &end, 10);
        if (errno == 0 && end && *end == '\0') {
            v.type = TomlValue::Type::Int;
            v.i = iv;
            return v;
        }
    }
    errno = 0;
    const double dv = std::strtod(raw.c_str(), &end);
    if (errno != 0 || !end || *end != '\0') fail(line, "cannot parse value '" + raw + "'");
    v.type = TomlValue::Type::Float;
    v.d = dv;
    return v;
}

// Split a single-line [a, b, c] array body at top-level commas.
TomlValue parse_value(const std::string& raw, std::size_t line) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') fail(line, "arrays must close on the same line");
        TomlValue v;
        v.type = TomlValue::Type::Array;
        const std::string body = trim(raw.substr(1, raw.size() - 2));
        if (body.empty()) return v;
        std::string item;
        bool quoted = false;
        for (std::size_t i = 0; i < body.size(); ++i) {
            const char c = body[i];
            if (c == '"' && (i == 0 || body[i - 1] != '\\')) quoted = !quoted;
            if (c == ',' && !quoted) {
                v.array.push_back(parse_scalar(trim(item), line));
                item.clear();
            } else {
                item.push_back(c);
            }
        }
        if (!trim(item).empty()) v.array.push_back(parse_scalar(trim(item), line));
        return v;
    }
    return parse_scalar(raw, line);
}

}  // namespace

double TomlValue::as_double() const {
    if (type == Type::Float) return d;
    if (type == Type::Int) return static_cast<double>(i);
    throw validation_error("config: expected a numeric value");
}

const TomlValue& TomlTable::require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw validation_error("config: missing required key '" + key + "'");
    return it->second;
}

std::int64_t TomlTable::get_int(const std::string& key) const {
    const TomlValue& v = require(key);
    if (v.type != TomlValue::Type::Int)
        throw validation_error("config: key '" + key + "' must be an integer");
    return v.i;
}
std::int64_t TomlTable::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}
double TomlTable::get_double(const std::string& key) const { return require(key).as_double(); }
double TomlTable::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}
bool TomlTable::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const TomlValue& v = require(key);
    if (v.type != TomlValue::Type::Bool)
        throw validation_error("config: key '" + key + "' must be a boolean");
    return v.b;
}
std::string TomlTable::get_string(const std::string& key) const {
    const TomlValue& v = require(key);
    if (v.type != TomlValue::Type::Str)
        throw validation_error("config: key '" + key + "' must be a string");
    return v.s;
}
std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}
std::vector<double> TomlTable::get_double_array(const std::string& key) const {
    const TomlValue& v = require(key);
    if (v.type != TomlValue::Type::Array)
        throw validation_error("config: key '" + key + "' must be an array");
    std::vector<double> out;
    out.reserve(v.array.size());
    for (const auto& item : v.array) out.push_back(item.as_double());
    return out;
}
std::vector<double> TomlTable::get_double_array(const std::string& key,
                                                const std::vector<double>& fallback) const {
    return has(key) ? get_double_array(key) : fallback;
}

TomlTable parse_toml_string(const std::string& text) {
    TomlTable table;
    std::istringstream in(text);
    std::string line;
    std::string prefix;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') fail(lineno, "malformed table header");
            const std::string name = trim(body.substr(1, body.size() - 2));
            if (!valid_key(name)) fail(lineno, "malformed table name '" + name + "'");
            prefix = name + ".";
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        if (!valid_key(key)) fail(lineno, "malformed key '" + key + "'");
        const std::string full = prefix + key;
        if (table.values_.count(full)) fail(lineno, "duplicate key '" + full + "'");
        table.values_[full] = parse_value(trim(body.substr(eq + 1)), lineno);
    }
    return table;
}

TomlTable parse_toml_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml_string(buf.str());
}

}  // namespace remdyn
