#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace svarpg::testing {

namespace {

struct Builder {
    std::vector<std::string> observed;
    std::vector<std::string> latents;
    std::vector<Edge> edges;
    int order = 0;

    void add(const std::string& from, const std::string& to, int lag, double c) {
        for (auto& e : edges)
            if (e.from == from && e.to == to && e.lag == lag) {
                e.coeff += c;
                return;
            }
        edges.push_back({from, to, lag, c});
        order = std::max(order, lag);
    }

    SvarModel build(std::mt19937_64& rng, double mass) {
        double total = 0.0;
        for (const auto& e : edges) total += std::abs(e.coeff);
        if (mass > 0.0 && total > 0.0)
            for (auto& e : edges) e.coeff *= mass / total;
        std::uniform_real_distribution<double> var(0.5, 2.0);
        std::map<std::string, double> noise;
        for (const auto& n : observed) noise[n] = var(rng);
        for (const auto& n : latents) noise[n] = var(rng);
        return SvarModel(observed, latents, order, edges, noise);
    }
};

double signed_weight(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.2, 1.0);
    std::bernoulli_distribution neg(0.4);
    return neg(rng) ? -mag(rng) : mag(rng);
}

int random_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

SvarModel random_model(std::mt19937_64& rng, const RandomModelSpec& spec) {
    Builder b;
    const int m = random_int(rng, spec.min_observed, spec.max_observed);
    const int d = random_int(rng, 0, spec.max_latent);
    const int p = random_int(rng, 1, spec.max_order);
    for (int i = 0; i < m; ++i) b.observed.push_back("O" + std::to_string(i));
    for (int i = 0; i < d; ++i) b.latents.push_back("L" + std::to_string(i));
    std::vector<std::string> all = b.observed;
    all.insert(all.end(), b.latents.begin(), b.latents.end());
    std::bernoulli_distribution coin(spec.edge_probability);
    for (int v = 0; v < m + d; ++v) {
        if (coin(rng)) b.add(all[static_cast<std::size_t>(v)], all[static_cast<std::size_t>(v)], random_int(rng, 1, p), signed_weight(rng));
        for (int w = 0; w < m + d; ++w) {
            if (v == w || (v < m && w >= m) || !coin(rng)) continue;
            int lag = random_int(rng, 0, p);
            if (lag == 0 && (!spec.contemporaneous || v > w)) lag = 1;
            b.add(all[static_cast<std::size_t>(v)], all[static_cast<std::size_t>(w)], lag, signed_weight(rng));
        }
    }
    // Every latent should touch at least one observed process.
    for (int h = m; h < m + d; ++h)
        b.add(all[static_cast<std::size_t>(h)], all[static_cast<std::size_t>(random_int(rng, 0, m - 1))], random_int(rng, 1, p),
              signed_weight(rng));
    b.order = std::max(b.order, p);
    return b.build(rng, spec.mass);
}

SvarModel random_frontdoor_model(std::mt19937_64& rng, bool with_latent) {
    Builder b;
    b.observed = {"X", "W", "Y"};
    if (with_latent) b.latents = {"L"};
    const int p = random_int(rng, 1, 3);
    for (const auto& v : {"X", "W", "Y"}) b.add(v, v, random_int(rng, 1, p), signed_weight(rng));
    b.add("X", "W", random_int(rng, 0, p), signed_weight(rng));
    b.add("X", "W", random_int(rng, 1, p), signed_weight(rng));
    b.add("W", "Y", random_int(rng, 1, p), signed_weight(rng));
    if (std::bernoulli_distribution(0.5)(rng)) b.add("X", "Y", random_int(rng, 1, p), signed_weight(rng));
    if (with_latent) {
        b.add("L", "L", 1, signed_weight(rng));
        b.add("L", "X", random_int(rng, 0, p), signed_weight(rng));
        b.add("L", "Y", random_int(rng, 0, p), signed_weight(rng));
    }
    b.order = std::max(b.order, p);
    return b.build(rng, 0.9);
}

SvarModel random_instrument_model(std::mt19937_64& rng) {
    Builder b;
    b.observed = {"X", "M", "Y"};
    b.latents = {"L"};
    const int p = random_int(rng, 1, 3);
    for (const auto& v : {"X", "M", "Y", "L"}) b.add(v, v, random_int(rng, 1, p), signed_weight(rng));
    b.add("X", "M", random_int(rng, 0, p), signed_weight(rng));
    b.add("X", "M", random_int(rng, 0, p), signed_weight(rng));
    b.add("M", "Y", random_int(rng, 0, p), signed_weight(rng));
    b.add("L", "M", random_int(rng, 0, p), signed_weight(rng));
    b.add("L", "Y", random_int(rng, 0, p), signed_weight(rng));
    b.order = std::max(b.order, p);
    return b.build(rng, 0.9);
}

SvarModel random_dag_model(std::mt19937_64& rng, int m, int max_order) {
    Builder b;
    const int p = random_int(rng, 1, max_order);
    for (int i = 0; i < m; ++i) b.observed.push_back("O" + std::to_string(i));
    for (int v = 0; v < m; ++v) {
        b.add(b.observed[static_cast<std::size_t>(v)], b.observed[static_cast<std::size_t>(v)], random_int(rng, 1, p), signed_weight(rng));
        for (int w = v + 1; w < m; ++w)
            if (std::bernoulli_distribution(0.6)(rng))
                b.add(b.observed[static_cast<std::size_t>(v)], b.observed[static_cast<std::size_t>(w)], random_int(rng, 0, p),
                      signed_weight(rng));
    }
    // Keep the graph connected along the index chain.
    for (int v = 0; v + 1 < m; ++v)
        b.add(b.observed[static_cast<std::size_t>(v)], b.observed[static_cast<std::size_t>(v + 1)], random_int(rng, 1, p),
              signed_weight(rng));
    b.order = std::max(b.order, p);
    return b.build(rng, 0.9);
}

SvarModel random_order0_model(std::mt19937_64& rng, int m, int d) {
    Builder b;
    for (int i = 0; i < m; ++i) b.observed.push_back("O" + std::to_string(i));
    for (int i = 0; i < d; ++i) b.latents.push_back("L" + std::to_string(i));
    std::uniform_real_distribution<double> coef(-0.9, 0.9);
    std::bernoulli_distribution coin(0.6);
    for (int v = 0; v < m; ++v)
        for (int w = v + 1; w < m; ++w)
            if (coin(rng)) b.add(b.observed[static_cast<std::size_t>(v)], b.observed[static_cast<std::size_t>(w)], 0, coef(rng));
    for (int h = 0; h < d; ++h) {
        for (int w = 0; w < m; ++w)
            if (coin(rng)) b.add(b.latents[static_cast<std::size_t>(h)], b.observed[static_cast<std::size_t>(w)], 0, coef(rng));
        for (int g = h + 1; g < d; ++g)
            if (coin(rng)) b.add(b.latents[static_cast<std::size_t>(h)], b.latents[static_cast<std::size_t>(g)], 0, coef(rng));
    }
    b.order = 0;
    return b.build(rng, 0.0);
}

double max_abs_diff(const FrequencySeries& a, const FrequencySeries& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) d = std::max(d, std::abs(a.values[j] - b.values[j]));
    return a.size() == b.size() ? d : std::numeric_limits<double>::infinity();
}

}  // namespace svarpg::testing
