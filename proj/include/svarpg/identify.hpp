#pragma once

#include "svarpg/graph.hpp"
#include "svarpg/spectral.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace svarpg {

enum class IdentMethod { FrontDoor, Instrument, Unconfounded, Sem };

std::string_view to_string(IdentMethod method) noexcept;

struct IdentifiedEdge {
    std::string from;
    std::string to;
    std::vector<cplx> values;
};

/**
 * @brief Per-frequency recovered transfer functions.
 *
 * denominator holds, per grid point, the smallest denominator modulus the
 * method divided by; patched marks grid points whose value was replaced by
 * the neighbour limit estimate.
 */
struct IdentificationResult {
    IdentMethod method = IdentMethod::FrontDoor;
    std::vector<double> omega;
    std::vector<IdentifiedEdge> edges;
    std::vector<double> denominator;
    std::vector<bool> patched;

    [[nodiscard]] const IdentifiedEdge& edge(std::string_view from, std::string_view to) const;
};

inline constexpr double kIllConditionedDenominator = 1e-12;
inline constexpr double kInstrumentRelativeThreshold = 1e-9;

/// Front-door template X -> W -> Y with X and Y possibly latent-confounded.
IdentificationResult identify_frontdoor(const SpectralMatrix& s, std::string_view x, std::string_view w,
                                        std::string_view y);

/// Instrument template X -> M -> Y with M and Y possibly latent-confounded.
IdentificationResult identify_instrument(const SpectralMatrix& s, std::string_view x, std::string_view m,
                                         std::string_view y);

/// Regression of the target on its parents in the projection, per frequency.
IdentificationResult identify_unconfounded_parents(const SpectralMatrix& s, const LatentProjection& g,
                                                   std::string_view target);

/// Order-0 front-door on a covariance matrix: a_{X,W} and a_{W,Y} as real numbers.
IdentificationResult identify_frontdoor_sem(const Eigen::MatrixXd& sigma, const std::vector<std::string>& labels,
                                            std::string_view x, std::string_view w, std::string_view y);

}  // namespace svarpg
