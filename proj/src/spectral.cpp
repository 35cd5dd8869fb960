#include "svarpg/spectral.hpp"

#include "svarpg/error.hpp"
#include "svarpg/io.hpp"
#include "svarpg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace svarpg {

namespace {

constexpr double kSingularRcond = 1e-12;

Eigen::MatrixXcd checked_inverse(const Eigen::MatrixXcd& a, double omega) {
    if (a.rows() == 0) return a;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    if (!(lu.rcond() > kSingularRcond))
        throw Error(ErrorKind::SingularAtFrequency, "I - h is singular at omega = " + format_double(omega), omega);
    return lu.inverse();
}

/// Edge transfers between every ordered pair of processes, precomputed once.
struct TransferTable {
    std::size_t n = 0;
    std::vector<RationalTransfer> table;
    std::vector<char> present;

    explicit TransferTable(const SvarModel& model) : n(model.num_processes()), table(n * n), present(n * n, 0) {
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w)
                if (v != w && model.has_link(v, w)) {
                    table[v * n + w] = edge_transfer(model, v, w);
                    present[v * n + w] = 1;
                }
    }
    [[nodiscard]] cplx at(std::size_t v, std::size_t w, double omega) const {
        return present[v * n + w] ? table[v * n + w](omega) : cplx{};
    }
};

cplx poly_at(const std::vector<double>& c, double omega) {
    // Horner in z = exp(-i omega).
    const cplx z = std::polar(1.0, -omega);
    cplx acc{};
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

double internal_spectrum(const SvarModel& model, std::size_t v, double omega) {
    std::vector<double> den{1.0};
    for (double a : model.auto_coeffs(v)) den.push_back(-a);
    return model.noise_var(v) / std::norm(poly_at(den, omega));
}

}  // namespace

std::vector<double> frequency_grid(int N) {
    if (N <= 0) throw Error(ErrorKind::Semantic, "grid size must be positive");
    std::vector<double> g(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) g[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / N;
    return g;
}

Polar polar(cplx z) {
    double theta = std::arg(z);
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    return {std::abs(z), theta};
}

cplx RationalTransfer::operator()(double omega) const { return poly_at(numerator, omega) / poly_at(denominator, omega); }

std::string RationalTransfer::to_string() const {
    auto poly = [](const std::vector<double>& c) {
        std::string s;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] == 0.0) continue;
            const double mag = std::abs(c[k]);
            if (s.empty())
                s += c[k] < 0 ? "-" : "";
            else
                s += c[k] < 0 ? " - " : " + ";
            if (k == 0)
                s += format_double(mag);
            else
                s += (mag == 1.0 ? std::string() : format_double(mag)) + "exp(-i" + std::to_string(k) + "w)";
        }
        return s.empty() ? std::string("0") : s;
    };
    return poly(numerator) + " / (" + poly(denominator) + ")";
}

RationalTransfer edge_transfer(const SvarModel& model, std::size_t v, std::size_t w) {
    if (v == w) throw Error(ErrorKind::SelfPair, "edge transfer of '" + model.name(v) + "' on itself");
    RationalTransfer t;
    t.numerator = model.cross_coeffs(v, w);
    t.denominator.push_back(1.0);
    for (double a : model.auto_coeffs(w)) t.denominator.push_back(-a);
    auto trim = [](std::vector<double>& c) {
        while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    };
    trim(t.numerator);
    trim(t.denominator);
    return t;
}

TransferGrid fourier(const FiniteFilter& f, int N) {
    TransferGrid g{frequency_grid(N), {}};
    g.values.resize(g.omega.size());
    parallel_for(g.omega.size(), [&](std::size_t j) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(f.rows(), f.cols());
        for (int s = f.start(); s <= f.end(); ++s)
            acc += std::polar(1.0, -g.omega[j] * s) * f.cref(s).cast<cplx>();
        g.values[j] = std::move(acc);
    });
    return g;
}

std::size_t SpectralMatrix::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    throw Error(ErrorKind::UnknownProcess, "unknown process '" + std::string(label) + "'");
}

FrequencySeries SpectralMatrix::entry(std::size_t i, std::size_t j) const {
    FrequencySeries s{omega, {}};
    for (const auto& m : values) s.values.push_back(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    return s;
}

SpectralComponents spectral_components(const SvarModel& model, int N) {
    const std::size_t m = model.num_observed();
    const std::size_t d = model.num_latent();
    const auto mi = static_cast<Eigen::Index>(m);
    const auto di = static_cast<Eigen::Index>(d);
    const TransferTable tt(model);

    SpectralComponents c;
    c.omega = frequency_grid(N);
    const std::size_t g = c.omega.size();
    c.h.resize(g);
    c.jt.resize(g);
    c.s_internal.resize(g);
    c.s_latent.resize(g);
    c.s_projected.resize(g);
    c.s_observed.resize(g);
    c.total_effect.resize(g);

    parallel_for(g, [&](std::size_t j) {
        const double w = c.omega[j];
        Eigen::MatrixXcd h(mi, mi);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = tt.at(a, b, w);
        Eigen::VectorXd si(static_cast<Eigen::Index>(m + d));
        for (std::size_t v = 0; v < m + d; ++v) si(static_cast<Eigen::Index>(v)) = internal_spectrum(model, v, w);

        Eigen::MatrixXcd jt(di, mi);
        Eigen::MatrixXcd sl(di, di);
        if (d > 0) {
            Eigen::MatrixXcd hl(di, di);
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b)
                    hl(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = tt.at(m + a, m + b, w);
                for (std::size_t b = 0; b < m; ++b)
                    jt(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = tt.at(m + a, b, w);
            }
            const Eigen::MatrixXcd inv_l = checked_inverse(Eigen::MatrixXcd::Identity(di, di) - hl, w);
            const Eigen::VectorXcd sil = si.tail(di).cast<cplx>();
            sl = inv_l.transpose() * sil.asDiagonal() * inv_l.conjugate();
        }
        Eigen::MatrixXcd sli = si.head(mi).cast<cplx>().asDiagonal();
        if (d > 0) sli += jt.transpose() * sl * jt.conjugate();
        const Eigen::MatrixXcd inv = checked_inverse(Eigen::MatrixXcd::Identity(mi, mi) - h, w);
        Eigen::MatrixXcd so = inv.transpose() * sli * inv.conjugate();
        for (Eigen::Index k = 0; k < mi; ++k) so(k, k) = so(k, k).real();
        if (!so.allFinite())
            throw Error(ErrorKind::SingularAtFrequency, "non-finite spectral density at omega = " + format_double(w), w);

        c.h[j] = std::move(h);
        c.jt[j] = std::move(jt);
        c.s_internal[j] = std::move(si);
        c.s_latent[j] = std::move(sl);
        c.s_projected[j] = std::move(sli);
        c.s_observed[j] = std::move(so);
        c.total_effect[j] = inv;
    });
    return c;
}

SpectralMatrix spectral_density(const SvarModel& model, int N) {
    auto c = spectral_components(model, N);
    return SpectralMatrix{model.observed(), std::move(c.omega), std::move(c.s_observed)};
}

FrequencySeries cctf(const SvarModel& model, std::size_t x, std::size_t y, const std::set<std::size_t>& controls,
                     int N) {
    const std::size_t m = model.num_observed();
    if (x >= m || y >= m) throw Error(ErrorKind::Semantic, "cctf endpoints must be observed processes");
    for (auto z : controls)
        if (z >= m || z == x || z == y) throw Error(ErrorKind::Semantic, "controls must be observed and differ from x, y");
    const TransferTable tt(model);
    const auto mi = static_cast<Eigen::Index>(m);
    FrequencySeries out{frequency_grid(N), {}};
    out.values.resize(out.omega.size());
    parallel_for(out.omega.size(), [&](std::size_t j) {
        const double w = out.omega[j];
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(mi, mi);
        for (std::size_t u = 0; u < m; ++u)
            for (std::size_t v = 0; v < m; ++v) {
                if (v == x || controls.count(v)) continue;
                a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) -= tt.at(u, v, w);
            }
        // Only column y of the inverse is needed.
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        if (!(lu.rcond() > kSingularRcond))
            throw Error(ErrorKind::SingularAtFrequency, "I - h is singular at omega = " + format_double(w), w);
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(mi);
        e(static_cast<Eigen::Index>(y)) = 1.0;
        out.values[j] = lu.solve(e)(static_cast<Eigen::Index>(x));
    });
    return out;
}

FrequencySeries path_transfer(const SvarModel& model, const DirectedPath& path, int N) {
    FrequencySeries out{frequency_grid(N), {}};
    std::vector<RationalTransfer> edges;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        edges.push_back(edge_transfer(model, path.vertices[i], path.vertices[i + 1]));
    for (double w : out.omega) {
        cplx p = 1.0;
        for (const auto& e : edges) p *= e(w);
        out.values.push_back(p);
    }
    return out;
}

double freq_path_rule_check(const SvarModel& model, std::size_t v, std::size_t w, int N, int depth) {
    const auto comp = spectral_components(model, N);
    const auto proj = latent_projection(process_graph(model));
    std::vector<cplx> sum(comp.omega.size(), cplx{});
    PathStream stream(proj.directed, v, w, {}, depth);
    while (auto p = stream.next()) {
        const auto t = path_transfer(model, *p, N);
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += t.values[j];
    }
    double dev = 0.0;
    for (std::size_t j = 0; j < sum.size(); ++j)
        dev = std::max(dev, std::abs(comp.total_effect[j](static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) - sum[j]));
    return dev;
}

FrequencySeries trek_monomial_function(const SpectralComponents& comp, const SvarModel& model, const Trek& trek) {
    const int N = static_cast<int>(comp.omega.size());
    const auto left = path_transfer(model, trek.left, N);
    const auto right = path_transfer(model, trek.right, N);
    const auto a = static_cast<Eigen::Index>(trek.left_top());
    const auto b = static_cast<Eigen::Index>(trek.right_top());
    FrequencySeries out{comp.omega, {}};
    for (std::size_t j = 0; j < comp.omega.size(); ++j)
        out.values.push_back(left.values[j] * comp.s_projected[j](a, b) * std::conj(right.values[j]));
    return out;
}

FrequencySeries trek_monomial_function(const SvarModel& model, const Trek& trek, int N) {
    return trek_monomial_function(spectral_components(model, N), model, trek);
}

namespace {

SpectralDecomposition decompose_with(const std::vector<Eigen::MatrixXcd>& s, const FrequencySeries& ctf,
                                     const SvarModel& model, std::size_t v, std::size_t w) {
    SpectralDecomposition d;
    d.ancestor = model.name(v);
    d.target = model.name(w);
    d.omega = ctf.omega;
    const auto vi = static_cast<Eigen::Index>(v);
    const auto wi = static_cast<Eigen::Index>(w);
    for (std::size_t j = 0; j < s.size(); ++j) {
        const cplx h = ctf.values[j];
        const double sv = s[j](vi, vi).real();
        const double sw = s[j](wi, wi).real();
        const double causal = std::norm(h) * sv;
        const double confounding = 2.0 * (h * s[j](vi, wi)).real() - 2.0 * causal;
        d.causal.push_back(causal);
        d.confounding.push_back(confounding);
        d.residual.push_back(sw - causal - confounding);
        d.total.push_back(sw);
    }
    return d;
}

void check_pair(const SvarModel& model, std::size_t v, std::size_t w) {
    if (v == w) throw Error(ErrorKind::SelfPair, "decomposition needs distinct ancestor and target");
    if (v >= model.num_observed() || w >= model.num_observed())
        throw Error(ErrorKind::Semantic, "decomposition endpoints must be observed processes");
}

}  // namespace

SpectralDecomposition decompose_spectrum(const SvarModel& model, std::size_t v, std::size_t w, int N) {
    check_pair(model, v, w);
    const auto comp = spectral_components(model, N);
    const auto ctf = cctf(model, v, w, {}, N);
    return decompose_with(comp.s_observed, ctf, model, v, w);
}

SourceDecomposition decompose_by_source(const SvarModel& model, std::size_t v, std::size_t w, int N) {
    check_pair(model, v, w);
    if (model.num_latent() > 0)
        throw Error(ErrorKind::LatentPresent, "per-source decomposition requires a model without latent processes");
    const auto comp = spectral_components(model, N);
    const auto ctf = cctf(model, v, w, {}, N);
    SourceDecomposition out;
    out.combined = decompose_with(comp.s_observed, ctf, model, v, w);
    const std::size_t m = model.num_observed();
    for (std::size_t u = 0; u < m; ++u) {
        std::vector<Eigen::MatrixXcd> s(comp.omega.size());
        for (std::size_t j = 0; j < comp.omega.size(); ++j) {
            const auto& inv = comp.total_effect[j];
            const auto ui = static_cast<Eigen::Index>(u);
            // Only source u carries noise: S = su * row_u(inv)^T conj(row_u(inv)).
            s[j] = comp.s_internal[j](ui) * (inv.row(ui).transpose() * inv.row(ui).conjugate());
        }
        out.sources.push_back(model.name(u));
        out.parts.push_back(decompose_with(s, ctf, model, v, w));
    }
    return out;
}

std::map<std::string, double> loop_gains(const SvarModel& model, int N) {
    const auto g = process_graph(model);
    const auto basis = cycle_basis(g.directed);
    const auto grid = frequency_grid(N);
    const TransferTable tt(model);
    std::map<std::string, double> out;
    for (const auto& cyc : basis.cycles) {
        double mx = 0.0;
        for (double w : grid) {
            cplx p = 1.0;
            for (std::size_t i = 0; i < cyc.size(); ++i) p *= tt.at(cyc[i], cyc[(i + 1) % cyc.size()], w);
            mx = std::max(mx, std::abs(p));
        }
        out[CycleBasis::label(cyc, g.directed)] = mx;
    }
    return out;
}

StabilityReport full_stability_report(const SvarModel& model, int N) {
    StabilityReport rep = check_stability(model, N);
    if (rep.satisfies_auto_sum_bound) {
        rep.loop_gain_max = loop_gains(model, N);
        rep.loop_gains_evaluated = true;
        if (!rep.loop_gains_below_one()) rep.warnings.emplace_back("some cycle has loop gain >= 1");
    }
    return rep;
}

}  // namespace svarpg
