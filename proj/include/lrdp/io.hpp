#pragma once

#include "matrix.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace lrdp {

static_assert(std::endian::native == std::endian::little,
              "binary matrix format is little-endian; big-endian hosts are unsupported");

namespace detail {

inline void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("unexpected end of binary matrix stream");
    return v;
}

inline void write_f64_row_major(std::ostream& os, const Mat& y) {
    for (Index i = 0; i < y.rows(); ++i)
        for (Index j = 0; j < y.cols(); ++j) {
            double v = y(i, j);
            os.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
}

inline void read_f64_row_major(std::istream& is, Mat& y) {
    for (Index i = 0; i < y.rows(); ++i)
        for (Index j = 0; j < y.cols(); ++j) {
            double v;
            is.read(reinterpret_cast<char*>(&v), sizeof v);
            if (!is) throw std::runtime_error("unexpected end of binary matrix stream");
            y(i, j) = v;
        }
}

} // namespace detail

inline constexpr char kMatrixMagic[4] = {'L', 'R', 'M', 'X'};

/// Binary layout: "LRMX", rows and cols as u64 LE, then rows*cols f64 LE row-major.
inline void write_matrix_binary(std::ostream& os, const Mat& y) {
    os.write(kMatrixMagic, 4);
    detail::write_u64(os, static_cast<std::uint64_t>(y.rows()));
    detail::write_u64(os, static_cast<std::uint64_t>(y.cols()));
    detail::write_f64_row_major(os, y);
    if (!os) throw std::runtime_error("failed to write binary matrix");
}

inline Mat read_matrix_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMatrixMagic, 4) != 0)
        throw std::runtime_error("not a binary matrix stream (bad magic)");
    const auto rows = detail::read_u64(is);
    const auto cols = detail::read_u64(is);
    if (rows == 0 || cols == 0 || rows > (1u << 24) || cols > (1u << 24))
        throw std::runtime_error("binary matrix header has implausible dimensions");
    Mat y(static_cast<Index>(rows), static_cast<Index>(cols));
    detail::read_f64_row_major(is, y);
    return y;
}

/// CSV: one matrix row per line, comma-separated decimal scalars.
inline void write_matrix_csv(std::ostream& os, const Mat& y) {
    os.precision(17);
    for (Index i = 0; i < y.rows(); ++i) {
        for (Index j = 0; j < y.cols(); ++j) {
            if (j) os << ',';
            os << y(i, j);
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("failed to write CSV matrix");
}

inline Mat read_matrix_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("CSV cell is not a number: '" + cell + "'");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("CSV rows have inconsistent lengths");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("CSV matrix is empty");
    Mat y(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < y.rows(); ++i)
        for (Index j = 0; j < y.cols(); ++j) y(i, j) = rows[i][j];
    return y;
}

enum class FileFormat { Csv, Binary };

inline void save_matrix(const std::string& path, const Mat& y, FileFormat fmt) {
    std::ofstream os(path, fmt == FileFormat::Binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    fmt == FileFormat::Binary ? write_matrix_binary(os, y) : write_matrix_csv(os, y);
}

inline Mat load_matrix(const std::string& path, FileFormat fmt) {
    std::ifstream is(path, fmt == FileFormat::Binary ? std::ios::binary : std::ios::in);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return fmt == FileFormat::Binary ? read_matrix_binary(is) : read_matrix_csv(is);
}

} // namespace lrdp
