#pragma once

// Trajectory CSV format. One header row
//   t,x_1..x_N,xhat_1..xhat_N,what_1..what_Mbar
// then one row per recorded sample, every value printed with 17 significant
// digits so the round-trip is bit exact. LF line endings. The control input
// is not part of the interchange format; it is reconstructible from the
// recorded state.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "signet/errors.hpp"
#include "signet/sim.hpp"

namespace signet {

/// Shortest representation that round-trips a double (up to 17 significant digits).
inline std::string format_sig17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);

    out << "t";
    for (int i = 1; i <= traj.n_nodes; ++i) out << ",x_" << i;
    for (int i = 1; i <= traj.n_nodes; ++i) out << ",xhat_" << i;
    for (int k = 1; k <= traj.m_bar; ++k) out << ",what_" << k;
    out << "\n";

    char buf[32];
    std::string line;
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        line.clear();
        auto append = [&](double v) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            line += buf;
        };
        append(traj.times[s]);
        for (int i = 0; i < traj.n_nodes; ++i) {
            line += ',';
            append(traj.x(s, i));
        }
        for (int i = 0; i < traj.n_nodes; ++i) {
            line += ',';
            append(traj.x_hat(s, i));
        }
        for (int k = 0; k < traj.m_bar; ++k) {
            line += ',';
            append(traj.w_hat(s, k));
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline double parse_csv_number(const std::string& field, int line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw FormatError("trajectory CSV: bad number '" + field + "' on line " +
                          std::to_string(line_no));
    return v;
}

}  // namespace detail

/// Strict reader for the format written above. The header fixes n_nodes and
/// m_bar; every data row must match it. The returned trajectory has an empty
/// control-input block.
inline Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);

    std::string line;
    if (!std::getline(in, line)) throw FormatError("trajectory CSV: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = detail::split_csv_line(line);
    if (header.empty() || header[0] != "t")
        throw FormatError("trajectory CSV: header must start with 't'");
    std::size_t pos = 1;
    auto count_prefixed = [&](const std::string& prefix) {
        std::size_t count = 0;
        while (pos < header.size() && header[pos] == prefix + std::to_string(count + 1)) {
            ++count;
            ++pos;
        }
        return count;
    };
    const std::size_t n = count_prefixed("x_");
    const std::size_t n_hat = count_prefixed("xhat_");
    const std::size_t m = count_prefixed("what_");
    if (n == 0 || n_hat != n || m != n * (n - 1) / 2 || pos != header.size())
        throw FormatError("trajectory CSV: header is not t,x_1..x_N,xhat_1..xhat_N,"
                          "what_1..what_Mbar");

    Trajectory traj;
    traj.n_nodes = static_cast<int>(n);
    traj.m_bar = static_cast<int>(m);

    std::vector<double> flat;
    const std::size_t cols = header.size();
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != cols)
            throw FormatError("trajectory CSV: line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(cols));
        for (const auto& f : fields) flat.push_back(detail::parse_csv_number(f, line_no));
    }
    if (in.bad()) throw IoError("read failed: " + path);

    const std::size_t rows = flat.size() / cols;
    if (rows == 0) throw FormatError("trajectory CSV: no data rows in " + path);
    traj.times.resize(rows);
    traj.x = Mat(rows, n);
    traj.x_hat = Mat(rows, n);
    traj.w_hat = Mat(rows, m);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* src = flat.data() + r * cols;
        traj.times[r] = src[0];
        for (std::size_t i = 0; i < n; ++i) traj.x(r, i) = src[1 + i];
        for (std::size_t i = 0; i < n; ++i) traj.x_hat(r, i) = src[1 + n + i];
        for (std::size_t k = 0; k < m; ++k) traj.w_hat(r, k) = src[1 + 2 * n + k];
    }
    return traj;
}

}  // namespace signet
