#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace svarpg {

/// Inclusive lag range [lo, hi].
struct LagWindow {
    int lo = 0;
    int hi = 0;
};

/**
 * @brief Matrix-valued sequence with finite support [start, end].
 *
 * Values outside the support are zero. Scalar filters are 1x1. A filter with
 * end == start - 1 is the empty (all zero) filter.
 */
class FiniteFilter {
public:
    FiniteFilter() : FiniteFilter(1, 1, 0, -1) {}
    FiniteFilter(Eigen::Index rows, Eigen::Index cols, int start, int end);

    /// Unit filter iota: identity at lag 0.
    static FiniteFilter identity(Eigen::Index n);
    static FiniteFilter scalar(const std::vector<double>& values, int start = 0);

    [[nodiscard]] Eigen::Index rows() const noexcept { return rows_; }
    [[nodiscard]] Eigen::Index cols() const noexcept { return cols_; }
    [[nodiscard]] int start() const noexcept { return start_; }
    [[nodiscard]] int end() const noexcept { return start_ + static_cast<int>(values_.size()) - 1; }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] bool in_support(int lag) const noexcept { return lag >= start_ && lag <= end(); }

    /// Value at `lag`; zero matrix outside the support.
    [[nodiscard]] Eigen::MatrixXd at(int lag) const;
    /// Mutable value inside the support.
    Eigen::MatrixXd& ref(int lag) { return values_.at(static_cast<std::size_t>(lag - start_)); }
    [[nodiscard]] const Eigen::MatrixXd& cref(int lag) const { return values_.at(static_cast<std::size_t>(lag - start_)); }
    /// Entry (i, j) at `lag`; zero outside the support.
    [[nodiscard]] double at(int lag, Eigen::Index i, Eigen::Index j) const;
    [[nodiscard]] double scalar_at(int lag) const { return at(lag, 0, 0); }

    /// Scalar filter of entry (i, j).
    [[nodiscard]] FiniteFilter entry(Eigen::Index i, Eigen::Index j) const;
    /// Sub-filter with the given row and column index sets.
    [[nodiscard]] FiniteFilter block(const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols) const;
    /// Lag-wise transpose (not a time reversal).
    [[nodiscard]] FiniteFilter transpose() const;
    /// Restriction (and zero extension) to [lo, hi].
    [[nodiscard]] FiniteFilter window(int lo, int hi) const;
    /// Scalar values over the support; requires a 1x1 filter.
    [[nodiscard]] std::vector<double> scalar_values() const;

    /// Sum over lags of the entry-wise absolute values.
    [[nodiscard]] double l1_norm() const;
    [[nodiscard]] double max_abs() const;

    FiniteFilter& operator+=(const FiniteFilter& other);
    FiniteFilter& operator*=(double s);
    friend FiniteFilter operator+(FiniteFilter a, const FiniteFilter& b) { return a += b; }
    friend FiniteFilter operator-(FiniteFilter a, const FiniteFilter& b);
    friend FiniteFilter operator*(double s, FiniteFilter a) { return a *= s; }

private:
    Eigen::Index rows_;
    Eigen::Index cols_;
    int start_;
    std::vector<Eigen::MatrixXd> values_;
};

/// (a * b)(u) = sum_t a(t) b(u - t). Optional output window restricts the computed lags.
FiniteFilter convolve(const FiniteFilter& a, const FiniteFilter& b, std::optional<LagWindow> out = std::nullopt);

/// (a *^ b)(v) = sum_t a(t + v) b(t). Support [a.start - b.end, a.end - b.start].
FiniteFilter tilted_convolve(const FiniteFilter& a, const FiniteFilter& b,
                             std::optional<LagWindow> out = std::nullopt);

/**
 * @brief Auto-covariance sequence C(tau) = E[X(t) X(t - tau)^T], tau = 0..L.
 *
 * Negative lags follow from C(-tau) = C(tau)^T.
 */
struct AcsSequence {
    std::vector<std::string> labels;
    std::vector<Eigen::MatrixXd> values;

    [[nodiscard]] int max_lag() const { return static_cast<int>(values.size()) - 1; }
    [[nodiscard]] Eigen::MatrixXd at(int tau) const;
    /// Two-sided filter over [-L, L].
    [[nodiscard]] FiniteFilter to_filter() const;
    static AcsSequence from_filter(const FiniteFilter& c, int max_lag, std::vector<std::string> labels);
};

}  // namespace svarpg
