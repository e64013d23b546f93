#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "esif/errors.hpp"
#include "esif/matrix.hpp"

namespace esif {

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i == line.size()) continue; // blank
        if (line[i] == '%') continue;   // comment
        return true;
    }
    return false;
}

} // namespace detail

/// Read a Matrix Market file as a dense symmetric matrix.
///
/// Accepts `coordinate` and `array` formats with `real` or `integer` fields
/// and `symmetric` or `general` symmetry.  Coordinate entries are 1-based;
/// duplicates are summed.  General files must pass a symmetry check
/// (entrywise |A - A^T| <= 1e-12 * max|A|), otherwise NotSymmetric is
/// thrown.  Malformed content raises ParseError with the line number.
inline Matrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);

    std::size_t lineno = 0;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file", 0);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (detail::lower(banner) != "%%matrixmarket" ||
        detail::lower(object) != "matrix")
        throw ParseError("not a MatrixMarket matrix header", lineno);
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (format != "coordinate" && format != "array")
        throw ParseError("unsupported format '" + format + "'", lineno);
    if (field != "real" && field != "integer")
        throw ParseError("unsupported field '" + field + "'", lineno);
    if (symmetry != "symmetric" && symmetry != "general")
        throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
    const bool symmetric = (symmetry == "symmetric");

    if (!detail::next_data_line(in, line, lineno))
        throw ParseError("missing size line", lineno);

    Matrix a;
    if (format == "coordinate") {
        std::istringstream sz(line);
        long long m = 0, n = 0, nnz = -1;
        if (!(sz >> m >> n >> nnz) || m <= 0 || n <= 0 || nnz < 0)
            throw ParseError("bad coordinate size line", lineno);
        if (m != n) throw NotSymmetric("matrix is not square");
        a = Matrix(static_cast<idx>(m), static_cast<idx>(n));
        for (long long k = 0; k < nnz; ++k) {
            if (!detail::next_data_line(in, line, lineno))
                throw ParseError("unexpected end of file in entries", lineno);
            std::istringstream es(line);
            long long i = 0, j = 0;
            double v = 0.0;
            if (!(es >> i >> j >> v))
                throw ParseError("bad coordinate entry", lineno);
            if (i < 1 || i > m || j < 1 || j > n)
                throw ParseError("coordinate entry out of range", lineno);
            const idx ii = static_cast<idx>(i - 1);
            const idx jj = static_cast<idx>(j - 1);
            a(ii, jj) += v;
            if (symmetric && ii != jj) a(jj, ii) += v;
        }
    } else { // array
        std::istringstream sz(line);
        long long m = 0, n = 0;
        if (!(sz >> m >> n) || m <= 0 || n <= 0)
            throw ParseError("bad array size line", lineno);
        if (m != n) throw NotSymmetric("matrix is not square");
        a = Matrix(static_cast<idx>(m), static_cast<idx>(n));
        auto read_value = [&](double& v) {
            if (!detail::next_data_line(in, line, lineno))
                throw ParseError("unexpected end of file in array values", lineno);
            std::istringstream vs(line);
            if (!(vs >> v)) throw ParseError("bad array value", lineno);
        };
        if (symmetric) {
            // lower triangle, column by column
            for (idx j = 0; j < a.cols(); ++j)
                for (idx i = j; i < a.rows(); ++i) {
                    double v;
                    read_value(v);
                    a(i, j) = v;
                    a(j, i) = v;
                }
        } else {
            for (idx j = 0; j < a.cols(); ++j)
                for (idx i = 0; i < a.rows(); ++i) {
                    double v;
                    read_value(v);
                    a(i, j) = v;
                }
        }
    }

    if (!symmetric) {
        double maxabs = 0.0;
        for (idx j = 0; j < a.cols(); ++j)
            for (idx i = 0; i < a.rows(); ++i)
                maxabs = std::max(maxabs, std::abs(a(i, j)));
        double defect = 0.0;
        for (idx j = 0; j < a.cols(); ++j)
            for (idx i = j + 1; i < a.rows(); ++i)
                defect = std::max(defect, std::abs(a(i, j) - a(j, i)));
        if (defect > 1e-12 * maxabs)
            throw NotSymmetric("general file failed the symmetry check");
        symmetrize(a);
    }
    return a;
}

/// Write a dense symmetric matrix as `coordinate real symmetric` with the
/// lower triangle spelled out at 17 significant digits.
inline void write_matrix_market(const std::string& path, const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("write_matrix_market: not square");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
    const idx n = a.rows();
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << n << " " << n << " " << n * (n + 1) / 2 << "\n";
    char buf[64];
    for (idx j = 0; j < n; ++j)
        for (idx i = j; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
        }
}

} // namespace esif
