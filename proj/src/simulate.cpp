#include "svarpg/simulate.hpp"

#include "svarpg/error.hpp"
#include "svarpg/parallel.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

namespace svarpg {

namespace {

class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        engine_.seed(seq);
    }

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Topological order of the contemporaneous subgraph, empty if it is cyclic.
std::vector<std::size_t> contemporaneous_order(const SvarModel& model) {
    const std::size_t n = model.num_processes();
    std::vector<int> indeg(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w)
            if (v != w && model.coeff(v, w, 0) != 0.0) ++indeg[w];
    std::vector<std::size_t> order;
    std::vector<char> done(n, 0);
    while (order.size() < n) {
        bool progressed = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v] || indeg[v] != 0) continue;
            done[v] = 1;
            order.push_back(v);
            progressed = true;
            for (std::size_t w = 0; w < n; ++w)
                if (w != v && model.coeff(v, w, 0) != 0.0) --indeg[w];
        }
        if (!progressed) return {};
    }
    return order;
}

std::mutex& fftw_plan_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

std::size_t Trajectory::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw Error(ErrorKind::UnknownProcess, "unknown process '" + std::string(name) + "'");
}

Trajectory Trajectory::observed_only() const {
    Trajectory t = *this;
    t.names.resize(num_observed);
    t.data = data.leftCols(static_cast<Eigen::Index>(num_observed));
    return t;
}

Trajectory simulate(const SvarModel& model, std::size_t T, std::uint64_t seed, std::size_t burn_in) {
    if (T == 0) throw Error(ErrorKind::Semantic, "trajectory length must be positive");
    const std::size_t n = model.num_processes();
    const int p = model.order();
    const auto ni = static_cast<Eigen::Index>(n);
    const auto order = contemporaneous_order(model);
    Eigen::MatrixXd inv;
    if (order.empty() && n > 0) inv = contemporaneous_inverse(model);

    std::vector<GaussianStream> rng;
    rng.reserve(n);
    for (std::size_t v = 0; v < n; ++v) rng.emplace_back(seed, v);
    Eigen::VectorXd sd = model.noise_vars().cwiseSqrt();

    // Lagged cross/auto terms as (from, to, lag, coeff) for the inner loop.
    struct Term {
        Eigen::Index from, to;
        int lag;
        double c;
    };
    std::vector<Term> lagged;
    std::vector<Term> contemporaneous;
    for (int k = 0; k <= p; ++k)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w) {
                const double c = model.coeff(v, w, k);
                if (c == 0.0) continue;
                (k == 0 ? contemporaneous : lagged)
                    .push_back({static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w), k, c});
            }

    const std::size_t total = T + burn_in;
    const std::size_t hist = static_cast<std::size_t>(p) + 1;
    Eigen::MatrixXd ring = Eigen::MatrixXd::Zero(ni, static_cast<Eigen::Index>(hist));
    Trajectory out;
    out.names = model.names();
    out.num_observed = model.num_observed();
    out.seed = seed;
    out.burn_in = burn_in;
    out.data.resize(static_cast<Eigen::Index>(T), ni);

    Eigen::VectorXd x(ni);
    for (std::size_t t = 0; t < total; ++t) {
        for (Eigen::Index v = 0; v < ni; ++v) x(v) = sd(v) * rng[static_cast<std::size_t>(v)].next();
        for (const auto& term : lagged) {
            const auto slot = static_cast<Eigen::Index>((t + hist - static_cast<std::size_t>(term.lag)) % hist);
            x(term.to) += term.c * ring(term.from, slot);
        }
        if (!contemporaneous.empty()) {
            if (!order.empty()) {
                for (auto w : order)
                    for (const auto& term : contemporaneous)
                        if (term.to == static_cast<Eigen::Index>(w)) x(term.to) += term.c * x(term.from);
            } else {
                x = inv * x;
            }
        }
        for (Eigen::Index v = 0; v < ni; ++v)
            if (!(std::abs(x(v)) <= kExplosionThreshold))
                throw Error(ErrorKind::Explosion, "simulated value of '" + model.name(static_cast<std::size_t>(v)) +
                                                      "' exceeded the explosion threshold at step " + std::to_string(t));
        ring.col(static_cast<Eigen::Index>(t % hist)) = x;
        if (t >= burn_in) out.data.row(static_cast<Eigen::Index>(t - burn_in)) = x.transpose();
    }
    return out;
}

SpectralEstimate welch_spectrum(const Trajectory& traj, std::size_t segment_len, std::size_t overlap, int N) {
    if (N <= 0) throw Error(ErrorKind::Semantic, "grid size must be positive");
    if (segment_len == 0 || segment_len % static_cast<std::size_t>(N) != 0)
        throw Error(ErrorKind::Semantic, "segment length must be a positive multiple of the grid size");
    if (overlap >= segment_len) throw Error(ErrorKind::Semantic, "overlap must be smaller than the segment length");
    const std::size_t T = traj.length();
    if (T < 2 * segment_len)
        throw Error(ErrorKind::TooShort, "trajectory of length " + std::to_string(T) + " is shorter than two segments");

    const std::size_t L = segment_len;
    const std::size_t n = traj.num_series();
    const std::size_t step = L - overlap;
    const std::size_t segments = (T - L) / step + 1;
    const std::size_t ratio = L / static_cast<std::size_t>(N);
    const long half = static_cast<long>((ratio - 1) / 2);
    const std::size_t nbins = L / 2 + 1;

    std::vector<double> taper(L);
    double taper_energy = 0.0;
    for (std::size_t t = 0; t < L; ++t) {
        taper[t] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(L)));
        taper_energy += taper[t] * taper[t];
    }

    using FftwBuffer = std::unique_ptr<double, decltype(&fftw_free)>;
    using FftwSpec = std::unique_ptr<fftw_complex, decltype(&fftw_free)>;
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(fftw_plan_mutex());
        FftwBuffer in(fftw_alloc_real(L), &fftw_free);
        FftwSpec spec(fftw_alloc_complex(nbins), &fftw_free);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(L), in.get(), spec.get(), FFTW_ESTIMATE);
    }

    // Per-segment cross periodograms, accumulated per grid point.
    const auto ni = static_cast<Eigen::Index>(n);
    std::vector<std::vector<Eigen::MatrixXcd>> partial(segments);
    parallel_for(segments, [&](std::size_t s) {
        FftwBuffer in(fftw_alloc_real(L), &fftw_free);
        FftwSpec spec(fftw_alloc_complex(nbins), &fftw_free);
        std::vector<std::vector<cplx>> coeffs(n, std::vector<cplx>(nbins));
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t t = 0; t < L; ++t)
                in.get()[t] = taper[t] * traj.data(static_cast<Eigen::Index>(s * step + t), static_cast<Eigen::Index>(v));
            fftw_execute_dft_r2c(plan, in.get(), spec.get());
            for (std::size_t k = 0; k < nbins; ++k) coeffs[v][k] = {spec.get()[k][0], spec.get()[k][1]};
        }
        auto bin = [&](std::size_t v, long k) {
            const auto kk = static_cast<std::size_t>(((k % static_cast<long>(L)) + static_cast<long>(L)) % static_cast<long>(L));
            return kk < nbins ? coeffs[v][kk] : std::conj(coeffs[v][L - kk]);
        };
        auto& acc = partial[s];
        acc.assign(static_cast<std::size_t>(N), Eigen::MatrixXcd::Zero(ni, ni));
        Eigen::VectorXcd col(ni);
        for (int j = 0; j < N; ++j) {
            const long centre = static_cast<long>(j) * static_cast<long>(ratio);
            for (long d = -half; d <= half; ++d) {
                for (std::size_t v = 0; v < n; ++v) col(static_cast<Eigen::Index>(v)) = bin(v, centre + d);
                acc[static_cast<std::size_t>(j)].noalias() += col * col.adjoint();
            }
        }
    });
    {
        std::lock_guard lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }

    SpectralEstimate est;
    est.segments = segments;
    est.segment_len = L;
    est.overlap = overlap;
    est.bins_per_point = static_cast<std::size_t>(2 * half + 1);
    est.spectrum.labels = traj.names;
    est.spectrum.omega = frequency_grid(N);
    const double scale = 1.0 / (static_cast<double>(segments) * static_cast<double>(est.bins_per_point) * taper_energy);
    for (int j = 0; j < N; ++j) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ni, ni);
        for (std::size_t s = 0; s < segments; ++s) m += partial[s][static_cast<std::size_t>(j)];
        m *= scale;
        m = 0.5 * (m + m.adjoint()).eval();
        est.spectrum.values.push_back(std::move(m));
    }
    return est;
}

}  // namespace svarpg
