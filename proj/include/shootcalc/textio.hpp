#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shootcalc/error.hpp"

namespace shootcalc {

/// Decimal rendering at 17 significant digits; round-trips any double.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Fixed-point rendering for diagram output.
inline std::string fmt_fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

inline std::vector<std::string> split_fields(const std::string& line, char sep = ',') {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

inline double parse_double_field(const std::string& source, long line,
                                 const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        throw ParseError(source, line, "not a number: '" + text + "'");
    return v;
}

inline long long parse_int_field(const std::string& source, long line,
                                 const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        throw ParseError(source, line, "not an integer: '" + text + "'");
    return v;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw DataError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace shootcalc
