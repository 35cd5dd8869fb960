#include "svarpg/io.hpp"

#include "svarpg/error.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace svarpg {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    double x = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) throw Error(ErrorKind::Schema, "malformed number '" + s + "'");
    return x;
}

std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::string format_double(double x) {
    if (x == 0.0) return "0";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t";
    for (const auto& n : traj.names) out << ',' << n;
    out << '\n';
    for (Eigen::Index t = 0; t < traj.data.rows(); ++t) {
        out << t;
        for (Eigen::Index v = 0; v < traj.data.cols(); ++v) out << ',' << format_double(traj.data(t, v));
        out << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "empty trajectory CSV");
    auto header = split_csv(chomp(line));
    if (header.empty() || header[0] != "t") throw Error(ErrorKind::Schema, "trajectory CSV must start with column 't'");
    Trajectory traj;
    traj.names.assign(header.begin() + 1, header.end());
    traj.num_observed = traj.names.size();
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw Error(ErrorKind::Schema, "trajectory CSV row " + std::to_string(rows + 1) + " has wrong field count");
        for (std::size_t k = 1; k < fields.size(); ++k) values.push_back(parse_double(fields[k]));
        ++rows;
    }
    const auto n = static_cast<Eigen::Index>(traj.names.size());
    traj.data.resize(static_cast<Eigen::Index>(rows), n);
    for (std::size_t r = 0; r < rows; ++r)
        for (Eigen::Index v = 0; v < n; ++v)
            traj.data(static_cast<Eigen::Index>(r), v) = values[r * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)];
    return traj;
}

void write_spectral_header(std::ostream& out) { out << "omega,quantity,row,col,re,im,modulus,phase\n"; }

void write_spectral_row(std::ostream& out, const SpectralRow& row) {
    const auto pf = polar(row.value);
    out << format_double(row.omega) << ',' << row.quantity << ',' << row.row << ',' << row.col << ','
        << format_double(row.value.real()) << ',' << format_double(row.value.imag()) << ',' << format_double(pf.r)
        << ',' << format_double(pf.theta) << '\n';
}

void write_spectral_matrix(std::ostream& out, const SpectralMatrix& s, const std::string& quantity) {
    for (std::size_t j = 0; j < s.size(); ++j)
        for (std::size_t a = 0; a < s.labels.size(); ++a)
            for (std::size_t b = 0; b < s.labels.size(); ++b)
                write_spectral_row(out, {s.omega[j], quantity, s.labels[a], s.labels[b],
                                         s.values[j](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))});
}

SpectralMatrix read_spectral_csv(std::istream& in, const std::string& quantity) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "empty spectral CSV");
    if (chomp(line) != "omega,quantity,row,col,re,im,modulus,phase")
        throw Error(ErrorKind::Schema, "unexpected spectral CSV header");
    SpectralMatrix s;
    std::vector<std::string> omegas_raw;
    std::map<std::string, std::size_t> omega_index;
    std::map<std::string, std::size_t> label_index;
    struct Cell {
        std::size_t j, a, b;
        cplx v;
    };
    std::vector<Cell> cells;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 8) throw Error(ErrorKind::Schema, "spectral CSV row has wrong field count");
        if (f[1] != quantity) continue;
        auto [oit, onew] = omega_index.emplace(f[0], s.omega.size());
        if (onew) s.omega.push_back(parse_double(f[0]));
        for (const auto* lbl : {&f[2], &f[3]}) {
            auto [lit, lnew] = label_index.emplace(*lbl, s.labels.size());
            if (lnew) s.labels.push_back(*lbl);
        }
        cells.push_back({oit->second, label_index[f[2]], label_index[f[3]], {parse_double(f[4]), parse_double(f[5])}});
    }
    if (s.omega.empty()) throw Error(ErrorKind::Schema, "spectral CSV has no rows of quantity '" + quantity + "'");
    const auto n = static_cast<Eigen::Index>(s.labels.size());
    s.values.assign(s.omega.size(), Eigen::MatrixXcd::Zero(n, n));
    std::vector<std::vector<char>> filled(s.omega.size(), std::vector<char>(static_cast<std::size_t>(n * n), 0));
    for (const auto& c : cells) {
        s.values[c.j](static_cast<Eigen::Index>(c.a), static_cast<Eigen::Index>(c.b)) = c.v;
        filled[c.j][c.a * static_cast<std::size_t>(n) + c.b] = 1;
    }
    for (const auto& f : filled)
        for (char x : f)
            if (!x) throw Error(ErrorKind::Schema, "spectral CSV is missing matrix entries");
    return s;
}

}  // namespace svarpg
