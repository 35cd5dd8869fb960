#pragma once

#include "svarpg/filter.hpp"
#include "svarpg/graph.hpp"
#include "svarpg/model.hpp"

#include <set>
#include <vector>

namespace svarpg {

inline constexpr int kDefaultFilterLags = 128;
inline constexpr double kDefaultTailTol = 1e-10;

/// Direct effect filter Lambda_{v->w} over lags 0..L (folds in w's auto-dependencies).
FiniteFilter direct_effect_filter(const SvarModel& model, std::size_t v, std::size_t w, int L);

/// Internal dynamics filter f_v over lags 0..L: f(0) = 1, f(j) = sum_k a_k f(j-k).
FiniteFilter internal_dynamics_filter(const SvarModel& model, std::size_t v, int L);

/// Matrix filter Lambda restricted to `indices` (rows = from, cols = to), zero diagonal.
FiniteFilter effect_filter_matrix(const SvarModel& model, const std::vector<std::size_t>& indices, int L);

/// Path filter: convolution of the direct effect filters along the path (iota for the empty path).
FiniteFilter path_filter(const SvarModel& model, const DirectedPath& path, int L);

struct PowerSeries {
    FiniteFilter sum;
    int terms = 0;
    double tail_norm = 0.0;
};

/**
 * @brief sum_{k=0}^{K} lambda^k over lags [0, L].
 *
 * K is the first power with l1 norm below tail_tol. Throws
 * Error{NonConvergent} if that does not happen within k_max powers.
 */
PowerSeries power_series(const FiniteFilter& lambda, int L, double tail_tol, int k_max);

/// Default power bound 10 * n * (p + 1).
int default_power_limit(std::size_t n, int order);

/// Lambda-infinity over every process of the model.
FiniteFilter lambda_infinity(const SvarModel& model, int L = kDefaultFilterLags, double tail_tol = kDefaultTailTol);

/// Controlled causal effect filter x -> y with every edge into x and into the controls deleted.
FiniteFilter ccf(const SvarModel& model, std::size_t x, std::size_t y, const std::set<std::size_t>& controls,
                 int L = kDefaultFilterLags, double tail_tol = kDefaultTailTol);

/**
 * @brief Time-domain SEP pieces of a model.
 *
 * Observed-block quantities are indexed like the model's observed
 * processes, latent-block quantities like its latents (offset by m).
 */
struct SepRepresentation {
    int filter_lags = 0;
    FiniteFilter lambda_observed;      ///< m x m direct effect filters
    FiniteFilter lambda_inf_observed;  ///< m x m power series
    FiniteFilter gamma;                ///< d x m latent -> observed direct effect filters
    FiniteFilter c_internal;           ///< m x m diagonal, two-sided
    FiniteFilter c_latent;             ///< d x d, two-sided
    FiniteFilter c_projected;          ///< m x m, two-sided (C^LI)
    int terms = 0;
    double tail_norm = 0.0;
};

SepRepresentation sep_representation(const SvarModel& model, int L = kDefaultFilterLags,
                                     double tail_tol = kDefaultTailTol);

/// ACS of the observed processes from the SEP representation.
AcsSequence acs_via_sep(const SvarModel& model, int L_acs, int L_filter = kDefaultFilterLags,
                        double tail_tol = kDefaultTailTol);
AcsSequence acs_from_sep(const SepRepresentation& sep, const SvarModel& model, int L_acs);

/// MA(infinity) coefficients Psi(0..L_psi) of the reduced-form VAR.
std::vector<Eigen::MatrixXd> ma_infinity_filter(const SvarModel& model, int L_psi);

/// ACS from the MA(infinity) representation; observed block unless include_latents.
AcsSequence acs_via_ma_infinity(const SvarModel& model, int L_acs, int L_psi = 1024, bool include_latents = false);

/// Trek-monomial filter Lambda^(Left) * C^LI_{top} *^ Lambda^(Right), restricted to [-L, L].
FiniteFilter trek_monomial_filter(const SepRepresentation& sep, const SvarModel& model, const Trek& trek);
FiniteFilter trek_monomial_filter(const SvarModel& model, const Trek& trek, int L = kDefaultFilterLags);

}  // namespace svarpg
