#pragma once

// Minimal TOML reader covering the subset the config and graph files use:
// comments, [table] and [[array-of-tables]] headers (dotted names allowed),
// and key = value lines with string, bool, integer, float, or flat numeric
// array values. Syntax problems raise ParseError with the offending line;
// contract problems (missing key, wrong type) raise FormatError.

#include <charconv>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "signet/errors.hpp"

namespace signet {

struct TomlValue {
    enum class Kind { boolean, integer, number, string, array };
    Kind kind = Kind::number;
    bool b = false;
    std::int64_t i = 0;
    double num = 0.0;
    std::string str;
    std::vector<double> arr;
    int line = 0;

    double as_number() const { return kind == Kind::integer ? static_cast<double>(i) : num; }
};

struct TomlTable {
    std::map<std::string, TomlValue> entries;
    int line = 0;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
};

struct TomlDocument {
    TomlTable root;
    std::map<std::string, TomlTable> tables;
    std::map<std::string, std::vector<TomlTable>> table_arrays;

    const TomlTable* find_table(const std::string& name) const {
        auto it = tables.find(name);
        return it == tables.end() ? nullptr : &it->second;
    }

    const std::vector<TomlTable>* find_table_array(const std::string& name) const {
        auto it = table_arrays.find(name);
        return it == table_arrays.end() ? nullptr : &it->second;
    }
};

namespace toml_detail {

inline std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

/// Remove a trailing comment, respecting string literals.
inline std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

inline bool valid_bare_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

inline bool valid_table_name(const std::string& k) {
    if (k.empty()) return false;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = k.find('.', start);
        const std::string part =
            dot == std::string::npos ? k.substr(start) : k.substr(start, dot - start);
        if (!valid_bare_key(strip(part))) return false;
        if (dot == std::string::npos) return true;
        start = dot + 1;
    }
}

inline double parse_number_token(const std::string& tok, int line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') ++first;  // from_chars rejects leading '+'
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("bad number '" + tok + "'", line);
    return v;
}

inline TomlValue parse_value(const std::string& raw, int line) {
    TomlValue v;
    v.line = line;
    const std::string s = strip(raw);
    if (s.empty()) throw ParseError("missing value", line);

    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ParseError("unterminated string", line);
        v.kind = TomlValue::Kind::string;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            char c = s[i];
            if (c == '"') throw ParseError("unescaped quote in string", line);
            if (c == '\\') {
                if (i + 2 >= s.size()) throw ParseError("dangling escape in string", line);
                const char e = s[++i];
                switch (e) {
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    default: throw ParseError(std::string("unsupported escape '\\") + e + "'", line);
                }
            }
            v.str += c;
        }
        return v;
    }

    if (s == "true" || s == "false") {
        v.kind = TomlValue::Kind::boolean;
        v.b = (s == "true");
        return v;
    }

    if (s.front() == '[') {
        if (s.back() != ']') throw ParseError("unterminated array", line);
        v.kind = TomlValue::Kind::array;
        const std::string inner = strip(s.substr(1, s.size() - 2));
        if (inner.empty()) return v;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = inner.find(',', start);
            const std::string tok = strip(
                comma == std::string::npos ? inner.substr(start)
                                           : inner.substr(start, comma - start));
            if (tok.empty()) throw ParseError("empty array element", line);
            v.arr.push_back(parse_number_token(tok, line));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return v;
    }

    // Bare token: integer if it parses as one with no float syntax.
    if (s.find_first_of(".eE") == std::string::npos) {
        const char* first = s.data();
        const char* last = s.data() + s.size();
        if (first != last && *first == '+') ++first;
        std::int64_t iv = 0;
        auto [ptr, ec] = std::from_chars(first, last, iv);
        if (ec == std::errc() && ptr == last) {
            v.kind = TomlValue::Kind::integer;
            v.i = iv;
            return v;
        }
    }
    v.kind = TomlValue::Kind::number;
    v.num = parse_number_token(s, line);
    return v;
}

}  // namespace toml_detail

inline TomlDocument parse_toml(const std::string& text) {
    TomlDocument doc;
    TomlTable* current = &doc.root;
    std::string current_name;  // empty = root

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = toml_detail::strip(toml_detail::strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            const bool is_array = line.size() > 1 && line[1] == '[';
            const std::string close = is_array ? "]]" : "]";
            if (line.size() < 2 + close.size() ||
                line.substr(line.size() - close.size()) != close)
                throw ParseError("malformed table header", line_no);
            const std::string name = toml_detail::strip(
                line.substr(is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1)));
            if (!toml_detail::valid_table_name(name))
                throw ParseError("bad table name '" + name + "'", line_no);
            if (is_array) {
                auto& vec = doc.table_arrays[name];
                vec.emplace_back();
                vec.back().line = line_no;
                current = &vec.back();
            } else {
                if (doc.tables.count(name))
                    throw ParseError("duplicate table [" + name + "]", line_no);
                auto& tbl = doc.tables[name];
                tbl.line = line_no;
                current = &tbl;
            }
            current_name = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        const std::string key = toml_detail::strip(line.substr(0, eq));
        if (!toml_detail::valid_bare_key(key))
            throw ParseError("bad key '" + key + "'", line_no);
        if (current->has(key))
            throw ParseError("duplicate key '" + key + "'" +
                                 (current_name.empty() ? "" : " in [" + current_name + "]"),
                             line_no);
        current->entries[key] = toml_detail::parse_value(line.substr(eq + 1), line_no);
    }
    return doc;
}

inline TomlDocument parse_toml_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return parse_toml(buf.str());
}

// Contract accessors: missing keys and type mismatches are FormatError so
// callers can distinguish them from syntax problems.

inline const TomlValue& require_value(const TomlTable& tbl, const std::string& key,
                                      const std::string& where) {
    auto it = tbl.entries.find(key);
    if (it == tbl.entries.end()) throw FormatError("missing key '" + key + "' in " + where);
    return it->second;
}

inline double require_number(const TomlTable& tbl, const std::string& key,
                             const std::string& where) {
    const TomlValue& v = require_value(tbl, key, where);
    if (v.kind != TomlValue::Kind::number && v.kind != TomlValue::Kind::integer)
        throw FormatError("key '" + key + "' in " + where + " must be a number");
    return v.as_number();
}

inline double get_number(const TomlTable& tbl, const std::string& key, double fallback,
                         const std::string& where) {
    return tbl.has(key) ? require_number(tbl, key, where) : fallback;
}

inline std::int64_t require_integer(const TomlTable& tbl, const std::string& key,
                                    const std::string& where) {
    const TomlValue& v = require_value(tbl, key, where);
    if (v.kind != TomlValue::Kind::integer)
        throw FormatError("key '" + key + "' in " + where + " must be an integer");
    return v.i;
}

inline std::int64_t get_integer(const TomlTable& tbl, const std::string& key,
                                std::int64_t fallback, const std::string& where) {
    return tbl.has(key) ? require_integer(tbl, key, where) : fallback;
}

inline std::string require_string(const TomlTable& tbl, const std::string& key,
                                  const std::string& where) {
    const TomlValue& v = require_value(tbl, key, where);
    if (v.kind != TomlValue::Kind::string)
        throw FormatError("key '" + key + "' in " + where + " must be a string");
    return v.str;
}

inline std::string get_string(const TomlTable& tbl, const std::string& key,
                              const std::string& fallback, const std::string& where) {
    return tbl.has(key) ? require_string(tbl, key, where) : fallback;
}

inline bool get_bool(const TomlTable& tbl, const std::string& key, bool fallback,
                     const std::string& where) {
    if (!tbl.has(key)) return fallback;
    const TomlValue& v = tbl.entries.at(key);
    if (v.kind != TomlValue::Kind::boolean)
        throw FormatError("key '" + key + "' in " + where + " must be true or false");
    return v.b;
}

inline std::vector<double> require_array(const TomlTable& tbl, const std::string& key,
                                         const std::string& where) {
    const TomlValue& v = require_value(tbl, key, where);
    if (v.kind != TomlValue::Kind::array)
        throw FormatError("key '" + key + "' in " + where + " must be an array of numbers");
    return v.arr;
}

}  // namespace signet
