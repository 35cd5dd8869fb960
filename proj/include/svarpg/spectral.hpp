#pragma once

#include "svarpg/filter.hpp"
#include "svarpg/graph.hpp"
#include "svarpg/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace svarpg {

using cplx = std::complex<double>;

inline constexpr int kDefaultGrid = 256;

/// omega_j = 2 pi j / N, j = 0..N-1.
std::vector<double> frequency_grid(int N);

struct Polar {
    double r = 0.0;
    double theta = 0.0;  ///< in (-pi, pi]
};
Polar polar(cplx z);

/// b(z) / a(z) evaluated at z = exp(-i omega); denominator[0] == 1.
struct RationalTransfer {
    std::vector<double> numerator;
    std::vector<double> denominator;

    [[nodiscard]] cplx operator()(double omega) const;
    /// e.g. "0.3exp(-i1w) / (1 - 0.3exp(-i1w) + 0.5exp(-i2w))"
    [[nodiscard]] std::string to_string() const;
};

/// Edge transfer h_{v->w}: numerator phi_{v,w}(k), denominator from w's auto-coefficients.
RationalTransfer edge_transfer(const SvarModel& model, std::size_t v, std::size_t w);

/// Grid-sampled complex matrices.
struct TransferGrid {
    std::vector<double> omega;
    std::vector<Eigen::MatrixXcd> values;

    [[nodiscard]] std::size_t size() const noexcept { return omega.size(); }
};

/// Grid-sampled scalar complex function.
struct FrequencySeries {
    std::vector<double> omega;
    std::vector<cplx> values;

    [[nodiscard]] std::size_t size() const noexcept { return omega.size(); }
    [[nodiscard]] Polar polar_at(std::size_t j) const { return polar(values.at(j)); }
};

/// Direct evaluation sum_s f(s) exp(-i omega s) on the N-grid.
TransferGrid fourier(const FiniteFilter& f, int N);

/// Per-frequency Hermitian matrices with process labels.
struct SpectralMatrix {
    std::vector<std::string> labels;
    std::vector<double> omega;
    std::vector<Eigen::MatrixXcd> values;

    [[nodiscard]] std::size_t size() const noexcept { return omega.size(); }
    [[nodiscard]] std::size_t index_of(std::string_view label) const;
    [[nodiscard]] FrequencySeries entry(std::size_t i, std::size_t j) const;
};

/**
 * @brief All frequency-domain SEP pieces on one grid.
 *
 * h is m x m (observed block of the edge transfers), jt is d x m (latent to
 * observed), s_internal the n diagonal internal spectra, s_latent d x d,
 * s_projected m x m and s_observed m x m.
 */
struct SpectralComponents {
    std::vector<double> omega;
    std::vector<Eigen::MatrixXcd> h;
    std::vector<Eigen::MatrixXcd> jt;
    std::vector<Eigen::VectorXd> s_internal;
    std::vector<Eigen::MatrixXcd> s_latent;
    std::vector<Eigen::MatrixXcd> s_projected;
    std::vector<Eigen::MatrixXcd> s_observed;
    /// (I - h)^{-1} per frequency.
    std::vector<Eigen::MatrixXcd> total_effect;
};

/// Throws Error{SingularAtFrequency} if I - h is numerically singular somewhere on the grid.
SpectralComponents spectral_components(const SvarModel& model, int N = kDefaultGrid);
SpectralMatrix spectral_density(const SvarModel& model, int N = kDefaultGrid);

/// Entry (x, y) of (I - h~)^{-1} where h~ has the columns into x and the controls zeroed.
FrequencySeries cctf(const SvarModel& model, std::size_t x, std::size_t y, const std::set<std::size_t>& controls,
                     int N = kDefaultGrid);

/// Product of edge transfers along a path of observed processes.
FrequencySeries path_transfer(const SvarModel& model, const DirectedPath& path, int N = kDefaultGrid);

/// max_omega |(I - h)^{-1}_{v,w} - sum over enumerated paths (depth) of the path transfers|.
double freq_path_rule_check(const SvarModel& model, std::size_t v, std::size_t w, int N, int depth);

/// h^(Left) S^LI_{top} conj(h^(Right)) per grid point.
FrequencySeries trek_monomial_function(const SpectralComponents& comp, const SvarModel& model, const Trek& trek);
FrequencySeries trek_monomial_function(const SvarModel& model, const Trek& trek, int N = kDefaultGrid);

struct SpectralDecomposition {
    std::string ancestor;
    std::string target;
    std::vector<double> omega;
    std::vector<double> causal;
    std::vector<double> confounding;
    std::vector<double> residual;
    std::vector<double> total;
};

/// Causal / confounding / residual split of the target's spectrum with respect to the ancestor.
SpectralDecomposition decompose_spectrum(const SvarModel& model, std::size_t v, std::size_t w, int N = kDefaultGrid);

struct SourceDecomposition {
    SpectralDecomposition combined;
    std::vector<std::string> sources;
    std::vector<SpectralDecomposition> parts;  ///< one per source, same order
};

/// Attribution of each factor to the individual noise sources. Throws Error{LatentPresent}.
SourceDecomposition decompose_by_source(const SvarModel& model, std::size_t v, std::size_t w, int N = kDefaultGrid);

/// Max over the grid of |product of edge transfers| for every minimal cycle, keyed "A->B->A".
std::map<std::string, double> loop_gains(const SvarModel& model, int N = kDefaultGrid);

/// check_stability plus loop gains, with the absolute-sum warning downgraded accordingly.
StabilityReport full_stability_report(const SvarModel& model, int N = kDefaultGrid);

}  // namespace svarpg
