#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace svarpg {

/// One structural coefficient phi_{from,to}(lag).
struct Edge {
    std::string from;
    std::string to;
    int lag = 0;
    double coeff = 0.0;
};

/**
 * @brief Latent-component structural VAR model.
 *
 * X(t) = sum_k Phi(k)^T X(t-k) + eta(t), eta(t) ~ N(0, diag(w)).
 *
 * Processes are indexed observed-first: indices [0, m) are the observed
 * processes in declaration order, [m, m+d) the latents. phi(k)(v, w) is
 * the coefficient of v(t-k) in the equation of w(t). Coefficients that are
 * not declared are exactly zero. Instances are immutable.
 */
class SvarModel {
public:
    /// Validating constructor; throws Error{Semantic} on any invariant violation.
    SvarModel(std::vector<std::string> observed, std::vector<std::string> latents, int order,
              const std::vector<Edge>& edges, const std::map<std::string, double>& noise_var);

    /// Parse the JSON model document. Throws Error{Schema} or Error{Semantic}.
    static SvarModel parse(std::string_view text);
    static SvarModel from_json(const nlohmann::json& doc);
    static SvarModel load(const std::filesystem::path& path);

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] std::string serialize() const;

    [[nodiscard]] const std::vector<std::string>& observed() const noexcept { return observed_; }
    [[nodiscard]] const std::vector<std::string>& latents() const noexcept { return latents_; }
    [[nodiscard]] std::size_t num_observed() const noexcept { return observed_.size(); }
    [[nodiscard]] std::size_t num_latent() const noexcept { return latents_.size(); }
    [[nodiscard]] std::size_t num_processes() const noexcept { return names_.size(); }
    [[nodiscard]] int order() const noexcept { return order_; }

    [[nodiscard]] const std::string& name(std::size_t index) const { return names_.at(index); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] bool is_latent(std::size_t index) const noexcept { return index >= observed_.size(); }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
    /// Throws Error{UnknownProcess} when the name is not a process of this model.
    [[nodiscard]] std::size_t index_of(std::string_view name) const;

    [[nodiscard]] double coeff(std::size_t from, std::size_t to, int lag) const;
    /// Dense coefficient matrix at `lag` (zero matrix for lag > order).
    [[nodiscard]] const Eigen::MatrixXd& phi(int lag) const;
    [[nodiscard]] double noise_var(std::size_t index) const { return noise_var_(static_cast<Eigen::Index>(index)); }
    [[nodiscard]] const Eigen::VectorXd& noise_vars() const noexcept { return noise_var_; }

    /// Auto-regressive coefficients a_1..a_p of process v (index k-1 holds a_k).
    [[nodiscard]] std::vector<double> auto_coeffs(std::size_t v) const;
    /// Cross coefficients b_0..b_p of the pair (from, to).
    [[nodiscard]] std::vector<double> cross_coeffs(std::size_t from, std::size_t to) const;
    /// True when some phi_{from,to}(k) is non-zero.
    [[nodiscard]] bool has_link(std::size_t from, std::size_t to) const;

    /// Declared edges in canonical (from, to, lag) index order.
    [[nodiscard]] std::vector<Edge> edges() const;

    /// Copy with every cross edge pointing into one of `targets` removed.
    [[nodiscard]] SvarModel without_edges_into(const std::vector<std::size_t>& targets) const;
    /// Copy with replaced innovation variances; zeros are permitted here (degenerate
    /// sources for attribution and simulation), negatives are not.
    [[nodiscard]] SvarModel with_noise_vars(const Eigen::VectorXd& variances) const;

    friend bool operator==(const SvarModel& a, const SvarModel& b);

private:
    SvarModel() = default;
    void rebuild_dense();

    using Key = std::tuple<std::size_t, std::size_t, int>;

    std::vector<std::string> observed_;
    std::vector<std::string> latents_;
    std::vector<std::string> names_;
    int order_ = 0;
    std::map<Key, double> coeffs_;
    Eigen::VectorXd noise_var_;
    std::vector<Eigen::MatrixXd> phi_;
    Eigen::MatrixXd zero_;
};

/**
 * @brief Summary of every stability condition the library relies on.
 *
 * The auto-sum bound (sum_k |phi_{V,V}(k)| < 1 for every V) guarantees the
 * edge transfer denominators never vanish; the absolute-sum bound (the sum of
 * all |phi| below one) is the sufficient condition for an absolutely summable
 * Lambda-infinity. When the latter fails the cycle loop gains decide.
 */
struct StabilityReport {
    std::vector<std::pair<std::string, double>> per_process_auto_sum;
    bool satisfies_auto_sum_bound = false;
    bool satisfies_absolute_sum_bound = false;
    double absolute_coefficient_sum = 0.0;
    double char_poly_min_modulus_margin = 0.0;
    double companion_spectral_radius = 0.0;
    bool var_stable = false;
    /// Filled in by spectral::attach_loop_gains; keyed by "A->B->A".
    std::map<std::string, double> loop_gain_max;
    bool loop_gains_evaluated = false;
    std::vector<std::string> warnings;

    [[nodiscard]] bool loop_gains_below_one() const;
    /// The SEP representation exists and every downstream computation is licensed.
    [[nodiscard]] bool sep_representable() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

inline constexpr double kCompanionRadiusTolerance = 1e-9;
inline constexpr double kCharPolyMarginTolerance = 1e-9;
inline constexpr double kLoopGainTolerance = 1e-6;
inline constexpr double kContemporaneousConditionLimit = 1e12;

/// Throws Error{SingularContemporaneous} when I - Phi(0)^T is numerically singular.
StabilityReport check_stability(const SvarModel& model, int grid_size);

/// (I - Phi(0)^T)^{-1}; throws Error{SingularContemporaneous}.
Eigen::MatrixXd contemporaneous_inverse(const SvarModel& model);

}  // namespace svarpg
