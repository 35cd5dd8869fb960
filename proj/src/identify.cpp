#include "svarpg/identify.hpp"

#include "svarpg/error.hpp"
#include "svarpg/io.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace svarpg {

namespace {

void require_labels(const SpectralMatrix& s, std::initializer_list<std::string_view> names) {
    std::vector<std::string_view> seen;
    for (auto n : names) {
        (void)s.index_of(n);
        if (std::find(seen.begin(), seen.end(), n) != seen.end())
            throw Error(ErrorKind::SelfPair, "identification template needs distinct processes");
        seen.push_back(n);
    }
}

[[noreturn]] void ill_conditioned(double omega) {
    throw Error(ErrorKind::IllConditioned, "denominator vanishes at omega = " + format_double(omega), omega);
}

/// Replaces values[j] at flagged j by the symmetric four-point limit from its neighbours
/// (cyclic grid), or by linear interpolation between the nearest unflagged points.
void patch_flagged(std::vector<cplx>& values, const std::vector<bool>& bad) {
    const auto n = static_cast<long>(values.size());
    auto idx = [n](long j) { return static_cast<std::size_t>(((j % n) + n) % n); };
    const std::vector<cplx> orig = values;
    for (long j = 0; j < n; ++j) {
        if (!bad[idx(j)]) continue;
        if (n >= 5 && !bad[idx(j - 1)] && !bad[idx(j + 1)] && !bad[idx(j - 2)] && !bad[idx(j + 2)]) {
            values[idx(j)] = (4.0 * (orig[idx(j - 1)] + orig[idx(j + 1)]) - (orig[idx(j - 2)] + orig[idx(j + 2)])) / 6.0;
            continue;
        }
        long lo = j - 1;
        long hi = j + 1;
        while (bad[idx(lo)]) --lo;
        while (bad[idx(hi)]) ++hi;
        const double t = static_cast<double>(j - lo) / static_cast<double>(hi - lo);
        values[idx(j)] = (1.0 - t) * orig[idx(lo)] + t * orig[idx(hi)];
    }
}

}  // namespace

std::string_view to_string(IdentMethod method) noexcept {
    switch (method) {
        case IdentMethod::FrontDoor: return "frontdoor";
        case IdentMethod::Instrument: return "instrument";
        case IdentMethod::Unconfounded: return "unconfounded";
        case IdentMethod::Sem: return "sem";
    }
    return "unknown";
}

const IdentifiedEdge& IdentificationResult::edge(std::string_view from, std::string_view to) const {
    for (const auto& e : edges)
        if (e.from == from && e.to == to) return e;
    throw Error(ErrorKind::UnknownProcess, "no identified edge " + std::string(from) + "->" + std::string(to));
}

IdentificationResult identify_frontdoor(const SpectralMatrix& s, std::string_view x, std::string_view w,
                                        std::string_view y) {
    require_labels(s, {x, w, y});
    const auto xi = static_cast<Eigen::Index>(s.index_of(x));
    const auto wi = static_cast<Eigen::Index>(s.index_of(w));
    const auto yi = static_cast<Eigen::Index>(s.index_of(y));
    IdentificationResult r;
    r.method = IdentMethod::FrontDoor;
    r.omega = s.omega;
    IdentifiedEdge exw{std::string(x), std::string(w), {}};
    IdentifiedEdge ewy{std::string(w), std::string(y), {}};
    for (std::size_t j = 0; j < s.size(); ++j) {
        const auto& m = s.values[j];
        const double sx = m(xi, xi).real();
        if (std::abs(sx) < kIllConditionedDenominator) ill_conditioned(s.omega[j]);
        const cplx hxw = m(wi, xi) / sx;
        const double den = m(wi, wi).real() - 2.0 * (hxw * m(xi, wi)).real() + std::norm(hxw) * sx;
        if (std::abs(den) < kIllConditionedDenominator) ill_conditioned(s.omega[j]);
        // Covariance of Y with the X-free part of W, over the variance of that part.
        const cplx hwy = (m(yi, wi) - std::conj(hxw) * m(yi, xi)) / den;
        exw.values.push_back(hxw);
        ewy.values.push_back(hwy);
        r.denominator.push_back(std::min(std::abs(sx), std::abs(den)));
        r.patched.push_back(false);
    }
    r.edges = {std::move(exw), std::move(ewy)};
    return r;
}

IdentificationResult identify_instrument(const SpectralMatrix& s, std::string_view x, std::string_view m,
                                         std::string_view y) {
    require_labels(s, {x, m, y});
    const auto xi = static_cast<Eigen::Index>(s.index_of(x));
    const auto mi = static_cast<Eigen::Index>(s.index_of(m));
    const auto yi = static_cast<Eigen::Index>(s.index_of(y));
    IdentificationResult r;
    r.method = IdentMethod::Instrument;
    r.omega = s.omega;
    IdentifiedEdge exm{std::string(x), std::string(m), {}};
    IdentifiedEdge emy{std::string(m), std::string(y), {}};
    std::vector<bool> bad;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const auto& sm = s.values[j];
        const double sx = sm(xi, xi).real();
        if (std::abs(sx) < kIllConditionedDenominator) ill_conditioned(s.omega[j]);
        const cplx smx = sm(mi, xi);
        const double scale = std::sqrt(std::max(0.0, sm(mi, mi).real() * sx));
        const bool degenerate = !(std::abs(smx) >= kInstrumentRelativeThreshold * scale) || std::abs(smx) == 0.0;
        exm.values.push_back(smx / sx);
        emy.values.push_back(degenerate ? cplx{} : sm(yi, xi) / smx);
        bad.push_back(degenerate);
        r.denominator.push_back(std::min(std::abs(sx), std::abs(smx)));
    }
    if (std::all_of(bad.begin(), bad.end(), [](bool b) { return b; }))
        throw Error(ErrorKind::NotIdentifiable, "cross spectrum of instrument and mediator vanishes on the whole grid");
    patch_flagged(emy.values, bad);
    r.patched = bad;
    r.edges = {std::move(exm), std::move(emy)};
    return r;
}

IdentificationResult identify_unconfounded_parents(const SpectralMatrix& s, const LatentProjection& g,
                                                   std::string_view target) {
    const std::size_t t = g.directed.index_of(target);
    for (std::size_t v = 0; v < g.size(); ++v)
        if (g.has_bidirected(t, v))
            throw Error(ErrorKind::ConfoundedTarget,
                        "'" + std::string(target) + "' is latent-confounded with '" + g.directed.name(v) + "'");
    std::vector<std::size_t> parents;
    for (std::size_t v = 0; v < g.size(); ++v)
        if (g.directed.has_edge(v, t)) parents.push_back(v);

    // A parent reachable from the target puts the target on a directed cycle.
    std::vector<char> reach(g.size(), 0);
    std::deque<std::size_t> queue{t};
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (auto x : g.directed.successors(u))
            if (!reach[x]) {
                reach[x] = 1;
                queue.push_back(x);
            }
    }
    for (auto p : parents)
        if (reach[p])
            throw Error(ErrorKind::ConfoundedTarget,
                        "'" + std::string(target) + "' lies on a directed cycle with parent '" + g.directed.name(p) + "'");

    const auto ti = static_cast<Eigen::Index>(s.index_of(target));
    std::vector<Eigen::Index> pi;
    for (auto p : parents) pi.push_back(static_cast<Eigen::Index>(s.index_of(g.directed.name(p))));
    const auto k = static_cast<Eigen::Index>(pi.size());

    IdentificationResult r;
    r.method = IdentMethod::Unconfounded;
    r.omega = s.omega;
    for (auto p : parents) r.edges.push_back({g.directed.name(p), std::string(target), {}});
    for (std::size_t j = 0; j < s.size(); ++j) {
        const auto& sm = s.values[j];
        Eigen::MatrixXcd a(k, k);
        Eigen::VectorXcd b(k);
        for (Eigen::Index q = 0; q < k; ++q) {
            b(q) = sm(ti, pi[static_cast<std::size_t>(q)]);
            for (Eigen::Index p = 0; p < k; ++p)
                a(q, p) = sm(pi[static_cast<std::size_t>(p)], pi[static_cast<std::size_t>(q)]);
        }
        double rc = 1.0;
        Eigen::VectorXcd h(k);
        if (k > 0) {
            Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
            rc = lu.rcond();
            if (!(rc > kIllConditionedDenominator)) ill_conditioned(s.omega[j]);
            h = lu.solve(b);
        }
        for (Eigen::Index p = 0; p < k; ++p) r.edges[static_cast<std::size_t>(p)].values.push_back(h(p));
        r.denominator.push_back(rc);
        r.patched.push_back(false);
    }
    return r;
}

IdentificationResult identify_frontdoor_sem(const Eigen::MatrixXd& sigma, const std::vector<std::string>& labels,
                                            std::string_view x, std::string_view w, std::string_view y) {
    if (sigma.rows() != sigma.cols() || static_cast<std::size_t>(sigma.rows()) != labels.size())
        throw Error(ErrorKind::DimensionMismatch, "covariance matrix and labels disagree");
    SpectralMatrix s{labels, {0.0}, {sigma.cast<cplx>()}};
    auto r = identify_frontdoor(s, x, w, y);
    r.method = IdentMethod::Sem;
    return r;
}

}  // namespace svarpg
