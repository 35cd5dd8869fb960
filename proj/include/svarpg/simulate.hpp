#pragma once

#include "svarpg/model.hpp"
#include "svarpg/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace svarpg {

/// Sample path; column k of `data` is the series of process names[k].
struct Trajectory {
    std::vector<std::string> names;
    std::size_t num_observed = 0;
    Eigen::MatrixXd data;  ///< T x n
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;

    [[nodiscard]] std::size_t length() const noexcept { return static_cast<std::size_t>(data.rows()); }
    [[nodiscard]] std::size_t num_series() const noexcept { return names.size(); }
    [[nodiscard]] std::size_t index_of(std::string_view name) const;
    /// Copy restricted to the observed processes.
    [[nodiscard]] Trajectory observed_only() const;
};

inline constexpr double kExplosionThreshold = 1e12;
inline constexpr std::size_t kDefaultBurnIn = 1000;

/**
 * @brief Draws T samples of the SVAR after discarding burn_in samples.
 *
 * Each process has its own std::mt19937_64 stream seeded from (seed, index);
 * Gaussians come from the Box-Muller transform on 53-bit uniforms, so output is
 * bit-reproducible across platforms with IEEE doubles.
 */
Trajectory simulate(const SvarModel& model, std::size_t T, std::uint64_t seed, std::size_t burn_in = kDefaultBurnIn);

struct SpectralEstimate {
    SpectralMatrix spectrum;
    std::size_t segments = 0;
    std::size_t segment_len = 0;
    std::size_t overlap = 0;
    std::size_t bins_per_point = 0;
    std::string taper = "hann";
};

inline constexpr std::size_t kDefaultSegmentLen = 4096;

/**
 * @brief Welch cross-spectral estimate on the N-grid, scaled to sum_tau C(tau) e^{-i w tau}.
 *
 * segment_len must be a multiple of N; the estimate at omega_j averages the
 * FFT bins of the grid cell centred on omega_j.
 */
SpectralEstimate welch_spectrum(const Trajectory& traj, std::size_t segment_len, std::size_t overlap, int N);

}  // namespace svarpg
