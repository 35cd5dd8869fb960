#pragma once

#include "svarpg/model.hpp"
#include "svarpg/spectral.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace svarpg::testing {

inline std::string fixture(const std::string& name) { return std::string(SVARPG_FIXTURE_DIR) + "/" + name; }

inline SvarModel load_fixture(const std::string& name) { return SvarModel::load(fixture(name + ".json")); }

/// Options for random_model.
struct RandomModelSpec {
    int min_observed = 2;
    int max_observed = 4;
    int max_latent = 2;
    int max_order = 3;
    double edge_probability = 0.5;
    bool contemporaneous = true;
    /// Total absolute coefficient mass; below 1 guarantees every stability condition.
    double mass = 0.9;
};

/**
 * @brief Random model with sum of |phi| = mass < 1.
 *
 * Contemporaneous edges only go from lower to higher index so the lag-0
 * subgraph is acyclic; lagged edges may form cycles.
 */
SvarModel random_model(std::mt19937_64& rng, const RandomModelSpec& spec = {});

/// X -> W -> Y with optional X -> Y, latent L -> X and L -> Y (front-door template).
SvarModel random_frontdoor_model(std::mt19937_64& rng, bool with_latent = true);

/// X -> M -> Y with latent L -> M and L -> Y (instrument template).
SvarModel random_instrument_model(std::mt19937_64& rng);

/// Fully observed random DAG (parents always have lower index).
SvarModel random_dag_model(std::mt19937_64& rng, int m, int max_order);

/// Order-0 model with contemporaneous DAG edges and optional latents.
SvarModel random_order0_model(std::mt19937_64& rng, int m, int d);

/// max_j |a_j - b_j|
double max_abs_diff(const FrequencySeries& a, const FrequencySeries& b);

}  // namespace svarpg::testing
