#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wtb/errors.hpp"

namespace wtb {

// Parser for the structured text format shared by the bridge model file, the
// vehicle catalog and the simulation config:
//
//   # comment
//   [section]                sections may repeat ([mode] blocks do)
//   key = value ...          values run to end of line; lists are
//                            whitespace-separated numbers
//
// The grammar is documented in data/FORMATS.md.

namespace detail {

inline std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double_token(std::string_view tok, const std::string& file, int line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError(file, line, "expected a number, got '" + std::string(tok) + "'");
    return v;
}

}  // namespace detail

struct KvEntry {
    std::string key;
    std::string value;  // raw text after '='
    int line = 0;
};

struct KvSection {
    std::string name;
    int line = 0;
    std::string file;
    std::vector<KvEntry> entries;

    const KvEntry* find(std::string_view key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }

    bool has(std::string_view key) const { return find(key) != nullptr; }

    const std::string& get(std::string_view key) const {
        const KvEntry* e = find(key);
        if (!e)
            throw ParseError(file, line,
                             "section [" + name + "] is missing key '" + std::string(key) + "'");
        return e->value;
    }

    double get_double(std::string_view key) const {
        const KvEntry* e = find(key);
        if (!e)
            throw ParseError(file, line,
                             "section [" + name + "] is missing key '" + std::string(key) + "'");
        return detail::parse_double_token(detail::trim(e->value), file, e->line);
    }

    long get_int(std::string_view key) const {
        double d = get_double(key);
        long i = static_cast<long>(d);
        if (static_cast<double>(i) != d)
            throw ParseError(file, find(key)->line,
                             "key '" + std::string(key) + "' must be an integer");
        return i;
    }

    std::vector<double> get_doubles(std::string_view key) const {
        const KvEntry* e = find(key);
        if (!e)
            throw ParseError(file, line,
                             "section [" + name + "] is missing key '" + std::string(key) + "'");
        std::vector<double> out;
        std::istringstream is(e->value);
        std::string tok;
        while (is >> tok) out.push_back(detail::parse_double_token(tok, file, e->line));
        return out;
    }

    std::optional<double> opt_double(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        return get_double(key);
    }

    std::optional<std::string> opt_string(std::string_view key) const {
        const KvEntry* e = find(key);
        if (!e) return std::nullopt;
        return e->value;
    }
};

struct KvFile {
    std::string path;
    std::vector<KvSection> sections;

    std::vector<const KvSection*> all(std::string_view name) const {
        std::vector<const KvSection*> out;
        for (const auto& s : sections)
            if (s.name == name) out.push_back(&s);
        return out;
    }

    // Unique section accessor; errors when absent or repeated.
    const KvSection& unique(std::string_view name) const {
        auto v = all(name);
        if (v.empty()) throw ParseError(path, 0, "missing required section [" + std::string(name) + "]");
        if (v.size() > 1)
            throw ParseError(path, v[1]->line, "section [" + std::string(name) + "] appears more than once");
        return *v[0];
    }

    const KvSection* maybe(std::string_view name) const {
        auto v = all(name);
        return v.empty() ? nullptr : v[0];
    }
};

inline KvFile parse_keyval_text(const std::string& text, const std::string& display_name) {
    KvFile out;
    out.path = display_name;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    KvSection* cur = nullptr;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(display_name, lineno, "malformed section header '" + std::string(line) + "'");
            KvSection s;
            s.name = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (s.name.empty()) throw ParseError(display_name, lineno, "empty section name");
            s.line = lineno;
            s.file = display_name;
            out.sections.push_back(std::move(s));
            cur = &out.sections.back();
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(display_name, lineno, "expected 'key = value', got '" + std::string(line) + "'");
        if (!cur) throw ParseError(display_name, lineno, "key outside of any [section]");
        KvEntry e;
        e.key = std::string(detail::trim(line.substr(0, eq)));
        e.value = std::string(detail::trim(line.substr(eq + 1)));
        e.line = lineno;
        if (e.key.empty()) throw ParseError(display_name, lineno, "empty key");
        if (cur->find(e.key))
            throw ParseError(display_name, lineno,
                             "duplicate key '" + e.key + "' in section [" + cur->name + "]");
        cur->entries.push_back(std::move(e));
    }
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline KvFile parse_keyval_file(const std::string& path) {
    return parse_keyval_text(read_text_file(path), path);
}

}  // namespace wtb
