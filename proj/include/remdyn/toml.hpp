// Minimal TOML subset sufficient for the experiment configs: [tables],
// key = value lines, scalars (integer, float, boolean, basic string) and
// single-line arrays of scalars, with # comments. Keys are exposed flattened
// as "table.key".
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace remdyn {

struct TomlValue {
    enum class Type { Int, Float, Bool, Str, Array };
    Type type = Type::Int;
    std::int64_t i = 0;
    double d = 0.0;
    bool b = false;
    std::string s;
    std::vector<TomlValue> array;

    double as_double() const;  // Int promotes to Float
};

class TomlTable {
  public:
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_double_array(const std::string& key) const;
    std::vector<double> get_double_array(const std::string& key,
                                         const std::vector<double>& fallback) const;

    const std::map<std::string, TomlValue>& values() const { return values_; }

    friend TomlTable parse_toml_string(const std::string& text);

  private:
    const TomlValue& require(const std::string& key) const;
    std::map<std::string, TomlValue> values_;
};

TomlTable parse_toml_string(const std::string& text);
TomlTable parse_toml_file(const std::string& path);

}  // namespace remdyn
