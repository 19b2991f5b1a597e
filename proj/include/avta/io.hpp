#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "avta/core.hpp"

namespace avta {
namespace io {

/// CSV point files: one point per row, m columns. An optional header row is
/// detected by the presence of a field that fails numeric parsing.
inline Matrix read_csv_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // skip blank lines
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (blank) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        bool parse_failed = false;
        while (std::getline(ss, field, ',')) {
            try {
                std::size_t pos = 0;
                const double v = std::stod(field, &pos);
                while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos])))
                    ++pos;
                if (pos != field.size()) { parse_failed = true; break; }
                row.push_back(v);
            } catch (const std::exception&) {
                parse_failed = true;
                break;
            }
        }
        if (parse_failed) {
            if (first) { first = false; continue; } // header row
            throw std::invalid_argument("read_csv_matrix: non-numeric field in row " +
                                        std::to_string(rows.size()));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("read_csv_matrix: ragged row");
        rows.push_back(std::move(row));
        first = false;
    }
    if (rows.empty()) throw std::invalid_argument("read_csv_matrix: no data rows");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return m;
}

inline Matrix read_csv_matrix(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_csv_matrix(f);
}

inline void write_csv_matrix(std::ostream& out, const Matrix& m) {
    out.precision(17);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

inline void write_csv_matrix(const std::string& path, const Matrix& m) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv_matrix(f, m);
}

// --- binary format: magic "AVTA1", LE u64 n, LE u64 m, n*m LE f64 row-major ---

inline constexpr char kBinaryMagic[5] = {'A', 'V', 'T', 'A', '1'};

inline void write_binary_points(std::ostream& out, const Matrix& m) {
    out.write(kBinaryMagic, 5);
    auto put_u64 = [&](std::uint64_t v) {
        unsigned char buf[8];
        for (int k = 0; k < 8; ++k) buf[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xFF);
        out.write(reinterpret_cast<const char*>(buf), 8);
    };
    put_u64(static_cast<std::uint64_t>(m.rows()));
    put_u64(static_cast<std::uint64_t>(m.cols()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            double d = m(i, j);
            std::uint64_t bits;
            std::memcpy(&bits, &d, 8);
            unsigned char buf[8];
            for (int k = 0; k < 8; ++k) buf[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xFF);
            out.write(reinterpret_cast<const char*>(buf), 8);
        }
}

inline void write_binary_points(const std::string& path, const Matrix& m) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_binary_points(f, m);
}

inline Matrix read_binary_points(std::istream& in) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kBinaryMagic, 5) != 0)
        throw std::invalid_argument("read_binary_points: bad magic");
    auto get_u64 = [&]() {
        unsigned char buf[8];
        in.read(reinterpret_cast<char*>(buf), 8);
        if (!in) throw std::invalid_argument("read_binary_points: truncated header");
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
        return v;
    };
    const std::uint64_t n = get_u64();
    const std::uint64_t m = get_u64();
    if (n == 0 || m == 0 || n > (1ull << 32) || m > (1ull << 32))
        throw std::invalid_argument("read_binary_points: implausible dimensions");
    Matrix out(static_cast<Index>(n), static_cast<Index>(m));
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j) {
            unsigned char buf[8];
            in.read(reinterpret_cast<char*>(buf), 8);
            if (!in) throw std::invalid_argument("read_binary_points: truncated payload");
            std::uint64_t bits = 0;
            for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
            double d;
            std::memcpy(&d, &bits, 8);
            out(i, j) = d;
        }
    return out;
}

inline Matrix read_binary_points(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_binary_points(f);
}

/// Reads a point file by extension: ".bin" for the binary format, CSV otherwise.
inline Matrix read_points_auto(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0)
        return read_binary_points(path);
    return read_csv_matrix(path);
}

// --- key=value sidecar metadata (line-oriented, insertion-ordered on write) ---

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline void write_metadata(const std::string& path, const Metadata& kv) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& [k, v] : kv) f << k << '=' << v << '\n';
}

inline Metadata read_metadata(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    Metadata kv;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("read_metadata: malformed line: " + line);
        kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return kv;
}

inline std::string metadata_get(const Metadata& kv, const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    throw std::out_of_range("metadata key not found: " + key);
}

} // namespace io
} // namespace avta
