#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "wtb/errors.hpp"

namespace wtb {

// CSV helpers. Numbers are emitted with std::to_chars (shortest
// representation that round-trips exactly), which keeps outputs
// locale-independent and bit-reproducible.

inline void append_number(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

inline std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

struct CsvTable {
    std::vector<std::string> comments;  // leading '#' lines, without the '#'
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open CSV file: " + path);
    CsvTable t;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            if (!have_header) t.comments.push_back(line.substr(1));
            continue;
        }
        auto cells = split_csv_line(line);
        if (!have_header) {
            t.header = cells;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            double v = 0.0;
            const char* b = cell.data();
            const char* e = cell.data() + cell.size();
            while (b < e && (*b == ' ' || *b == '\t')) ++b;
            auto [ptr, ec] = std::from_chars(b, e, v);
            if (ec != std::errc())
                throw ParseError(path, lineno, "bad numeric cell '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != t.header.size())
            throw ParseError(path, lineno, "row has " + std::to_string(row.size()) +
                                               " cells, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError(path, lineno, "CSV file has no header row");
    return t;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open CSV file for writing: " + path);
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i)
            out_ << (i ? "," : "") << names[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        buf_.clear();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) buf_ += ',';
            append_number(buf_, values[i]);
        }
        buf_ += '\n';
        out_ << buf_;
    }

    void close() {
        out_.close();
        if (!out_) throw Error("failed writing CSV file: " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
    std::string buf_;
};

}  // namespace wtb
