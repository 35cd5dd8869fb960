#include "svarpg/filter.hpp"

#include "svarpg/error.hpp"

#include <algorithm>
#include <cmath>

namespace svarpg {

FiniteFilter::FiniteFilter(Eigen::Index rows, Eigen::Index cols, int start, int end)
    : rows_(rows), cols_(cols), start_(start) {
    if (rows < 0 || cols < 0) throw Error(ErrorKind::DimensionMismatch, "negative filter dimensions");
    if (end >= start) values_.assign(static_cast<std::size_t>(end - start + 1), Eigen::MatrixXd::Zero(rows, cols));
}

FiniteFilter FiniteFilter::identity(Eigen::Index n) {
    FiniteFilter f(n, n, 0, 0);
    f.values_[0].setIdentity();
    return f;
}

FiniteFilter FiniteFilter::scalar(const std::vector<double>& values, int start) {
    FiniteFilter f(1, 1, start, start + static_cast<int>(values.size()) - 1);
    for (std::size_t i = 0; i < values.size(); ++i) f.values_[i](0, 0) = values[i];
    return f;
}

Eigen::MatrixXd FiniteFilter::at(int lag) const {
    if (!in_support(lag)) return Eigen::MatrixXd::Zero(rows_, cols_);
    return values_[static_cast<std::size_t>(lag - start_)];
}

double FiniteFilter::at(int lag, Eigen::Index i, Eigen::Index j) const {
    if (!in_support(lag)) return 0.0;
    return values_[static_cast<std::size_t>(lag - start_)](i, j);
}

FiniteFilter FiniteFilter::entry(Eigen::Index i, Eigen::Index j) const { return block({i}, {j}); }

FiniteFilter FiniteFilter::block(const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols) const {
    FiniteFilter f(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()), start_, end());
    for (std::size_t k = 0; k < values_.size(); ++k)
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b)
                f.values_[k](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = values_[k](rows[a], cols[b]);
    return f;
}

FiniteFilter FiniteFilter::transpose() const {
    FiniteFilter f(cols_, rows_, start_, end());
    for (std::size_t k = 0; k < values_.size(); ++k) f.values_[k] = values_[k].transpose();
    return f;
}

FiniteFilter FiniteFilter::window(int lo, int hi) const {
    FiniteFilter f(rows_, cols_, lo, hi);
    for (int s = std::max(lo, start_); s <= std::min(hi, end()); ++s) f.ref(s) = cref(s);
    return f;
}

std::vector<double> FiniteFilter::scalar_values() const {
    if (rows_ != 1 || cols_ != 1) throw Error(ErrorKind::DimensionMismatch, "scalar_values on a matrix filter");
    std::vector<double> v;
    v.reserve(values_.size());
    for (const auto& m : values_) v.push_back(m(0, 0));
    return v;
}

double FiniteFilter::l1_norm() const {
    double s = 0.0;
    for (const auto& m : values_) s += m.cwiseAbs().sum();
    return s;
}

double FiniteFilter::max_abs() const {
    double s = 0.0;
    for (const auto& m : values_)
        if (m.size()) s = std::max(s, m.cwiseAbs().maxCoeff());
    return s;
}

FiniteFilter& FiniteFilter::operator+=(const FiniteFilter& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_)
        throw Error(ErrorKind::DimensionMismatch, "filter sum with mismatched dimensions");
    if (other.empty()) return *this;
    if (empty()) return *this = other;
    const int lo = std::min(start_, other.start_);
    const int hi = std::max(end(), other.end());
    if (lo != start_ || hi != end()) *this = window(lo, hi);
    for (int s = other.start_; s <= other.end(); ++s) ref(s) += other.cref(s);
    return *this;
}

FiniteFilter& FiniteFilter::operator*=(double s) {
    for (auto& m : values_) m *= s;
    return *this;
}

FiniteFilter operator-(FiniteFilter a, const FiniteFilter& b) {
    FiniteFilter nb = b;
    nb *= -1.0;
    return a += nb;
}

FiniteFilter convolve(const FiniteFilter& a, const FiniteFilter& b, std::optional<LagWindow> out) {
    if (a.cols() != b.rows())
        throw Error(ErrorKind::DimensionMismatch, "convolve: inner dimensions " + std::to_string(a.cols()) + " and " +
                                                      std::to_string(b.rows()) + " differ");
    if (a.empty() || b.empty()) {
        const LagWindow w = out.value_or(LagWindow{0, -1});
        return FiniteFilter(a.rows(), b.cols(), w.lo, w.hi);
    }
    const LagWindow w = out.value_or(LagWindow{a.start() + b.start(), a.end() + b.end()});
    FiniteFilter r(a.rows(), b.cols(), w.lo, w.hi);
    for (int u = w.lo; u <= w.hi; ++u) {
        const int t_lo = std::max(a.start(), u - b.end());
        const int t_hi = std::min(a.end(), u - b.start());
        if (t_lo > t_hi) continue;
        Eigen::MatrixXd& acc = r.ref(u);
        for (int t = t_lo; t <= t_hi; ++t) acc.noalias() += a.cref(t) * b.cref(u - t);
    }
    return r;
}

FiniteFilter tilted_convolve(const FiniteFilter& a, const FiniteFilter& b, std::optional<LagWindow> out) {
    if (a.cols() != b.rows())
        throw Error(ErrorKind::DimensionMismatch, "tilted_convolve: inner dimensions " + std::to_string(a.cols()) +
                                                      " and " + std::to_string(b.rows()) + " differ");
    if (a.empty() || b.empty()) {
        const LagWindow w = out.value_or(LagWindow{0, -1});
        return FiniteFilter(a.rows(), b.cols(), w.lo, w.hi);
    }
    const LagWindow w = out.value_or(LagWindow{a.start() - b.end(), a.end() - b.start()});
    FiniteFilter r(a.rows(), b.cols(), w.lo, w.hi);
    for (int v = w.lo; v <= w.hi; ++v) {
        const int t_lo = std::max(b.start(), a.start() - v);
        const int t_hi = std::min(b.end(), a.end() - v);
        if (t_lo > t_hi) continue;
        Eigen::MatrixXd& acc = r.ref(v);
        for (int t = t_lo; t <= t_hi; ++t) acc.noalias() += a.cref(t + v) * b.cref(t);
    }
    return r;
}

Eigen::MatrixXd AcsSequence::at(int tau) const {
    if (tau >= 0) {
        if (tau > max_lag()) return Eigen::MatrixXd::Zero(values.at(0).rows(), values.at(0).cols());
        return values[static_cast<std::size_t>(tau)];
    }
    return at(-tau).transpose();
}

FiniteFilter AcsSequence::to_filter() const {
    const auto n = values.empty() ? Eigen::Index{0} : values[0].rows();
    FiniteFilter f(n, n, -max_lag(), max_lag());
    for (int t = -max_lag(); t <= max_lag(); ++t) f.ref(t) = at(t);
    return f;
}

AcsSequence AcsSequence::from_filter(const FiniteFilter& c, int max_lag, std::vector<std::string> labels) {
    AcsSequence acs{std::move(labels), {}};
    for (int t = 0; t <= max_lag; ++t) acs.values.push_back(c.at(t));
    return acs;
}

}  // namespace svarpg
