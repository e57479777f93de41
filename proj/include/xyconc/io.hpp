#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xyconc/dynamics.hpp"
#include "xyconc/matrix.hpp"
#include "xyconc/model.hpp"

// Flat-file formats: trajectory CSV output and the hand-writable density
// matrix input file.

namespace xyconc {
namespace detail {

// 17 significant digits round-trip a double exactly.
inline std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// One matrix entry as "a+bi" with no interior spaces.
inline std::string format_complex_entry(cdouble z) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

inline double parse_real_token(std::string_view s) {
    const std::string owned(s);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(owned, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + owned + "'");
    }
    if (used != owned.size())
        throw std::invalid_argument("trailing characters in number: '" + owned + "'");
    return value;
}

// Accepts "a+bi" / "a-bi", a bare real "a", or a bare imaginary "bi". The
// split point is the last sign that is not an exponent sign.
inline cdouble parse_complex_entry(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty entry");
    if (s.back() != 'i' && s.back() != 'I') return cdouble(parse_real_token(s), 0.0);

    const std::string_view body = s.substr(0, s.size() - 1);
    if (body.empty()) throw std::invalid_argument("lone 'i' is not an entry");
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) return cdouble(0.0, parse_real_token(body));
    const double re = parse_real_token(body.substr(0, split));
    std::string_view imag_part = body.substr(split);
    if (imag_part.size() == 1)
        throw std::invalid_argument("sign with no imaginary magnitude: '" + std::string(s) + "'");
    return cdouble(re, parse_real_token(imag_part));
}

}  // namespace detail

inline std::string trajectory_csv_header(std::string_view extra_name = {}) {
    std::string header = "t,gamma_t,C";
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            header += ",rho" + std::to_string(i) + std::to_string(j) + "_re";
            header += ",rho" + std::to_string(i) + std::to_string(j) + "_im";
        }
    if (!extra_name.empty()) {
        header += ',';
        header += extra_name;
    }
    return header;
}

// One row per recorded time: t, gamma t, C, then the 16 matrix entries in
// row-major order as re/im pairs. LF line endings, 17 significant digits.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double gamma,
                                 std::string_view extra_name = {},
                                 const std::vector<double>* extra = nullptr) {
    if (extra && extra->size() != traj.times.size())
        throw std::invalid_argument("extra column length does not match the trajectory");
    os << trajectory_csv_header(extra_name) << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << detail::format_g17(traj.times[k]) << ','
           << detail::format_g17(gamma * traj.times[k]) << ','
           << detail::format_g17(traj.concurrences[k]);
        const ComplexMatrix<4>& m = traj.states[k].matrix();
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                os << ',' << detail::format_g17(m(i, j).real()) << ','
                   << detail::format_g17(m(i, j).imag());
            }
        if (extra) os << ',' << detail::format_g17((*extra)[k]);
        os << '\n';
    }
}

inline void write_matrix_file(std::ostream& os, const ComplexMatrix<4>& m) {
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (j) os << ' ';
            os << detail::format_complex_entry(m(i, j));
        }
        os << '\n';
    }
}

// Matrix file: four data lines of four whitespace-separated "a+bi" entries;
// '#' starts a comment line; blank lines are skipped. Parse failures report
// the line and column of the offending token.
inline DensityMatrix read_density_matrix(std::istream& is, const std::string& name) {
    ComplexMatrix<4> m;
    std::size_t row = 0;
    std::string line;
    for (std::size_t line_no = 1; std::getline(is, line); ++line_no) {
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        if (row == 4)
            throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                        ": more than 4 data lines");
        std::size_t col = 0;
        while (pos != std::string::npos) {
            std::size_t end = line.find_first_of(" \t\r", pos);
            const std::string_view token =
                std::string_view(line).substr(pos, end == std::string::npos ? end : end - pos);
            if (col == 4)
                throw std::invalid_argument(name + ":" + std::to_string(line_no) + ":" +
                                            std::to_string(pos + 1) +
                                            ": more than 4 entries on a line");
            try {
                m(row, col) = detail::parse_complex_entry(token);
            } catch (const std::invalid_argument& err) {
                throw std::invalid_argument(name + ":" + std::to_string(line_no) + ":" +
                                            std::to_string(pos + 1) + ": " + err.what());
            }
            ++col;
            pos = line.find_first_not_of(" \t\r", end);
        }
        if (col != 4)
            throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                        ": expected 4 entries, got " + std::to_string(col));
        ++row;
    }
    if (row != 4)
        throw std::invalid_argument(name + ": expected 4 data lines, got " + std::to_string(row));
    return DensityMatrix(m);
}

inline DensityMatrix read_density_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
    return read_density_matrix(in, path);
}

}  // namespace xyconc
