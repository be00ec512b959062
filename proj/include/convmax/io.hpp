#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "convmax/grid.hpp"

namespace convmax {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

inline double parse_double_field(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw io_error(context + ": cannot parse numeric field '" + s + "'");
    }
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Writes samples as CSV with header `x,value` (1-D) or `x,y,value` (2-D),
/// rows in linear index order.
inline void write_samples_csv(std::ostream& os, const SampledFunction& f) {
    const Grid& g = f.grid();
    os << (g.dim() == 1 ? "x,value\n" : "x,y,value\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto c = g.center(i);
        os << detail::format_double(c[0]);
        if (g.dim() == 2) os << ',' << detail::format_double(c[1]);
        os << ',' << detail::format_double(f[i]) << '\n';
    }
}

inline void write_samples_csv(const std::string& path, const SampledFunction& f) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    write_samples_csv(os, f);
    if (!os) throw io_error("write failed for '" + path + "'");
}

/// Reads a sample CSV produced by write_samples_csv back onto `grid`.
/// Validates the header, the row count, and that the coordinates are
/// monotone in linear index and match the grid's cell centers.
inline SampledFunction read_samples_csv(std::istream& is, const Grid& grid,
                                        const std::string& name) {
    std::string line;
    if (!std::getline(is, line)) throw io_error(name + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string expected_header = grid.dim() == 1 ? "x,value" : "x,y,value";
    if (line != expected_header)
        throw io_error(name + ": expected header '" + expected_header + "', got '" + line + "'");

    const double coord_tol = 1e-9 * grid.cell_width();
    std::vector<double> values;
    values.reserve(grid.cell_count());
    double prev_x = -std::numeric_limits<double>::infinity();
    double prev_y = -std::numeric_limits<double>::infinity();
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        const std::size_t want = grid.dim() == 1 ? 2u : 3u;
        if (fields.size() != want)
            throw io_error(name + ": row " + std::to_string(row + 2) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(want));
        if (row >= grid.cell_count())
            throw io_error(name + ": more rows than grid cells (" +
                           std::to_string(grid.cell_count()) + ")");
        const auto c = grid.center(row);
        const double x = detail::parse_double_field(fields[0], name);
        if (std::abs(x - c[0]) > coord_tol)
            throw io_error(name + ": x coordinate mismatch at row " + std::to_string(row + 2) +
                           " (expected " + detail::format_double(c[0]) + ")");
        double y = 0.0;
        if (grid.dim() == 2) {
            y = detail::parse_double_field(fields[1], name);
            if (std::abs(y - c[1]) > coord_tol)
                throw io_error(name + ": y coordinate mismatch at row " + std::to_string(row + 2));
            if (y < prev_y - coord_tol) throw io_error(name + ": y coordinates not monotone");
            if (y > prev_y + coord_tol) prev_x = -std::numeric_limits<double>::infinity();
        } else if (x < prev_x - coord_tol) {
            throw io_error(name + ": x coordinates not monotone");
        }
        if (grid.dim() == 2 && x < prev_x - coord_tol)
            throw io_error(name + ": x coordinates not monotone within a row block");
        prev_x = x;
        prev_y = y;
        values.push_back(detail::parse_double_field(fields[grid.dim() == 1 ? 1 : 2], name));
        ++row;
    }
    if (values.size() != grid.cell_count())
        throw io_error(name + ": got " + std::to_string(values.size()) + " rows, grid needs " +
                       std::to_string(grid.cell_count()));
    try {
        return SampledFunction(grid, std::move(values));
    } catch (const domain_error& e) {
        throw io_error(name + ": " + e.what());
    }
}

inline SampledFunction read_samples_csv(const std::string& path, const Grid& grid) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open sample file '" + path + "'");
    return read_samples_csv(is, grid, path);
}

} // namespace convmax
