#include "svarpg/sep.hpp"

#include "svarpg/error.hpp"

#include <algorithm>
#include <numeric>

namespace svarpg {

namespace {

std::vector<std::size_t> range_indices(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> v(hi - lo);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

}  // namespace

FiniteFilter direct_effect_filter(const SvarModel& model, std::size_t v, std::size_t w, int L) {
    if (v == w) throw Error(ErrorKind::SelfPair, "direct effect filter of '" + model.name(v) + "' on itself");
    if (L < 0) throw Error(ErrorKind::Semantic, "filter length must be non-negative");
    const int p = model.order();
    std::vector<double> lam(static_cast<std::size_t>(L) + 1, 0.0);
    if (!model.has_link(v, w)) return FiniteFilter::scalar(lam);
    const auto a = model.auto_coeffs(w);
    for (int s = 0; s <= L; ++s) {
        double x = s <= p ? model.coeff(v, w, s) : 0.0;
        for (int j = 1; j <= std::min(s, p); ++j) x += lam[static_cast<std::size_t>(s - j)] * a[static_cast<std::size_t>(j - 1)];
        lam[static_cast<std::size_t>(s)] = x;
    }
    return FiniteFilter::scalar(lam);
}

FiniteFilter internal_dynamics_filter(const SvarModel& model, std::size_t v, int L) {
    if (L < 0) throw Error(ErrorKind::Semantic, "filter length must be non-negative");
    const int p = model.order();
    const auto a = model.auto_coeffs(v);
    std::vector<double> f(static_cast<std::size_t>(L) + 1, 0.0);
    f[0] = 1.0;
    for (int j = 1; j <= L; ++j) {
        double x = 0.0;
        for (int k = 1; k <= std::min(j, p); ++k) x += a[static_cast<std::size_t>(k - 1)] * f[static_cast<std::size_t>(j - k)];
        f[static_cast<std::size_t>(j)] = x;
    }
    return FiniteFilter::scalar(f);
}

FiniteFilter effect_filter_matrix(const SvarModel& model, const std::vector<std::size_t>& indices, int L) {
    const auto n = static_cast<Eigen::Index>(indices.size());
    FiniteFilter lam(n, n, 0, L);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto v = indices[static_cast<std::size_t>(i)];
            const auto w = indices[static_cast<std::size_t>(j)];
            if (v == w || !model.has_link(v, w)) continue;
            const auto f = direct_effect_filter(model, v, w, L);
            for (int s = 0; s <= L; ++s) lam.ref(s)(i, j) = f.scalar_at(s);
        }
    }
    return lam;
}

FiniteFilter path_filter(const SvarModel& model, const DirectedPath& path, int L) {
    FiniteFilter f = FiniteFilter::identity(1);
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        f = convolve(f, direct_effect_filter(model, path.vertices[i], path.vertices[i + 1], L), LagWindow{0, L});
    return f.window(0, L);
}

int default_power_limit(std::size_t n, int order) { return 10 * static_cast<int>(n) * (order + 1); }

PowerSeries power_series(const FiniteFilter& lambda, int L, double tail_tol, int k_max) {
    const auto n = lambda.rows();
    PowerSeries out{FiniteFilter::identity(n).window(0, L), 0, 0.0};
    FiniteFilter power = FiniteFilter::identity(n).window(0, L);
    for (int k = 1; k <= std::max(k_max, 1); ++k) {
        power = convolve(power, lambda, LagWindow{0, L});
        out.sum += power;
        out.terms = k;
        out.tail_norm = power.l1_norm();
        if (out.tail_norm < tail_tol) return out;
        if (!std::isfinite(out.tail_norm)) break;
    }
    throw Error(ErrorKind::NonConvergent, "power series of the effect filters did not decay below " +
                                              std::to_string(tail_tol) + " within " + std::to_string(k_max) +
                                              " terms (last norm " + std::to_string(out.tail_norm) + ")");
}

FiniteFilter lambda_infinity(const SvarModel& model, int L, double tail_tol) {
    const auto all = range_indices(0, model.num_processes());
    return power_series(effect_filter_matrix(model, all, L), L, tail_tol,
                        default_power_limit(model.num_processes(), model.order()))
        .sum;
}

FiniteFilter ccf(const SvarModel& model, std::size_t x, std::size_t y, const std::set<std::size_t>& controls, int L,
                 double tail_tol) {
    const std::size_t m = model.num_observed();
    if (x >= m || y >= m) throw Error(ErrorKind::Semantic, "ccf endpoints must be observed processes");
    for (auto z : controls)
        if (z >= m || z == x || z == y) throw Error(ErrorKind::Semantic, "controls must be observed and differ from x, y");
    std::vector<std::size_t> targets(controls.begin(), controls.end());
    targets.push_back(x);
    const SvarModel cut = model.without_edges_into(targets);
    const auto obs = range_indices(0, m);
    const auto series = power_series(effect_filter_matrix(cut, obs, L), L, tail_tol, default_power_limit(m, model.order()));
    return series.sum.entry(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
}

SepRepresentation sep_representation(const SvarModel& model, int L, double tail_tol) {
    const std::size_t m = model.num_observed();
    const std::size_t d = model.num_latent();
    const auto obs = range_indices(0, m);
    const auto lat = range_indices(m, m + d);
    const LagWindow two_sided{-L, L};

    SepRepresentation sep;
    sep.filter_lags = L;
    sep.lambda_observed = effect_filter_matrix(model, obs, L);
    const auto series = power_series(sep.lambda_observed, L, tail_tol, default_power_limit(m, model.order()));
    sep.lambda_inf_observed = series.sum;
    sep.terms = series.terms;
    sep.tail_norm = series.tail_norm;

    auto internal_block = [&](const std::vector<std::size_t>& idx) {
        const auto k = static_cast<Eigen::Index>(idx.size());
        FiniteFilter c(k, k, -L, L);
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto v = idx[static_cast<std::size_t>(i)];
            const auto f = internal_dynamics_filter(model, v, L);
            const auto cf = tilted_convolve(f, f, two_sided);
            for (int t = -L; t <= L; ++t) c.ref(t)(i, i) = model.noise_var(v) * cf.scalar_at(t);
        }
        return c;
    };
    sep.c_internal = internal_block(obs);

    const auto md = static_cast<Eigen::Index>(m);
    const auto dd = static_cast<Eigen::Index>(d);
    if (d == 0) {
        sep.gamma = FiniteFilter(0, md, 0, L);
        sep.c_latent = FiniteFilter(0, 0, -L, L);
        sep.c_projected = sep.c_internal;
        return sep;
    }

    // Latents form an upstream block: their covariance follows from the same SEP recursion.
    const auto lambda_l = effect_filter_matrix(model, lat, L);
    const auto lat_inf = power_series(lambda_l, L, tail_tol, default_power_limit(d, model.order())).sum;
    const auto cil = internal_block(lat);
    sep.c_latent = tilted_convolve(convolve(lat_inf.transpose(), cil, LagWindow{-L, 2 * L}), lat_inf, two_sided);

    sep.gamma = FiniteFilter(dd, md, 0, L);
    for (Eigen::Index h = 0; h < dd; ++h) {
        for (Eigen::Index o = 0; o < md; ++o) {
            const auto lv = lat[static_cast<std::size_t>(h)];
            const auto ov = obs[static_cast<std::size_t>(o)];
            if (!model.has_link(lv, ov)) continue;
            const auto f = direct_effect_filter(model, lv, ov, L);
            for (int s = 0; s <= L; ++s) sep.gamma.ref(s)(h, o) = f.scalar_at(s);
        }
    }
    sep.c_projected =
        sep.c_internal +
        tilted_convolve(convolve(sep.gamma.transpose(), sep.c_latent, LagWindow{-L, 2 * L}), sep.gamma, two_sided);
    return sep;
}

AcsSequence acs_from_sep(const SepRepresentation& sep, const SvarModel& model, int L_acs) {
    const int L = sep.filter_lags;
    const auto& li = sep.lambda_inf_observed;
    const auto a = convolve(li.transpose(), sep.c_projected, LagWindow{-L, L_acs + L});
    const auto c = tilted_convolve(a, li, LagWindow{0, L_acs});
    return AcsSequence::from_filter(c, L_acs, model.observed());
}

AcsSequence acs_via_sep(const SvarModel& model, int L_acs, int L_filter, double tail_tol) {
    if (L_acs < 0) throw Error(ErrorKind::Semantic, "ACS lag count must be non-negative");
    return acs_from_sep(sep_representation(model, L_filter, tail_tol), model, L_acs);
}

std::vector<Eigen::MatrixXd> ma_infinity_filter(const SvarModel& model, int L_psi) {
    const auto n = static_cast<Eigen::Index>(model.num_processes());
    const int p = model.order();
    // (I - Phi(0))^{-1} = ((I - Phi(0)^T)^{-1})^T
    const Eigen::MatrixXd inv = contemporaneous_inverse(model).transpose();
    std::vector<Eigen::MatrixXd> phi_prime(static_cast<std::size_t>(p) + 1);
    for (int l = 1; l <= p; ++l) phi_prime[static_cast<std::size_t>(l)] = model.phi(l) * inv;
    std::vector<Eigen::MatrixXd> psi(static_cast<std::size_t>(L_psi) + 1, Eigen::MatrixXd::Zero(n, n));
    psi[0].setIdentity();
    for (int k = 1; k <= L_psi; ++k)
        for (int l = 1; l <= std::min(k, p); ++l)
            psi[static_cast<std::size_t>(k)].noalias() += psi[static_cast<std::size_t>(k - l)] * phi_prime[static_cast<std::size_t>(l)];
    return psi;
}

AcsSequence acs_via_ma_infinity(const SvarModel& model, int L_acs, int L_psi, bool include_latents) {
    const auto n = static_cast<Eigen::Index>(model.num_processes());
    const Eigen::MatrixXd inv = contemporaneous_inverse(model).transpose();
    const Eigen::MatrixXd w_prime = inv.transpose() * model.noise_vars().asDiagonal() * inv;
    const auto psi = ma_infinity_filter(model, L_psi);
    const auto keep = include_latents ? n : static_cast<Eigen::Index>(model.num_observed());
    AcsSequence acs;
    acs.labels = include_latents ? model.names() : model.observed();
    for (int tau = 0; tau <= L_acs; ++tau) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k + tau <= L_psi; ++k)
            c.noalias() += psi[static_cast<std::size_t>(k + tau)].transpose() * w_prime * psi[static_cast<std::size_t>(k)];
        acs.values.push_back(c.topLeftCorner(keep, keep));
    }
    return acs;
}

FiniteFilter trek_monomial_filter(const SepRepresentation& sep, const SvarModel& model, const Trek& trek) {
    const int L = sep.filter_lags;
    const auto left = path_filter(model, trek.left, L);
    const auto right = path_filter(model, trek.right, L);
    const auto top = sep.c_projected.entry(static_cast<Eigen::Index>(trek.left_top()),
                                           static_cast<Eigen::Index>(trek.right_top()));
    return tilted_convolve(convolve(left, top, LagWindow{-L, 2 * L}), right, LagWindow{-L, L});
}

FiniteFilter trek_monomial_filter(const SvarModel& model, const Trek& trek, int L) {
    return trek_monomial_filter(sep_representation(model, L), model, trek);
}

}  // namespace svarpg
