#pragma once

#include "svarpg/simulate.hpp"
#include "svarpg/spectral.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace svarpg {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

/// `t,<proc1>,<proc2>,...` with one row per time step.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Inverse of write_trajectory_csv; throws Error{Schema} on malformed input.
Trajectory read_trajectory_csv(std::istream& in);

/// One spectral CSV row: omega,quantity,row,col,re,im,modulus,phase.
struct SpectralRow {
    double omega = 0.0;
    std::string quantity;
    std::string row;
    std::string col;
    cplx value;
};

void write_spectral_header(std::ostream& out);
void write_spectral_row(std::ostream& out, const SpectralRow& row);
/// All (row, col) entries of every grid point under the given quantity name.
void write_spectral_matrix(std::ostream& out, const SpectralMatrix& s, const std::string& quantity);

/// Reads rows of `quantity` back into a SpectralMatrix (labels in first-seen order).
SpectralMatrix read_spectral_csv(std::istream& in, const std::string& quantity = "S");

}  // namespace svarpg
