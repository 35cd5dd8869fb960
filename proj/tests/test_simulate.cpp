#include "support.hpp"

#include "svarpg/error.hpp"
#include "svarpg/sep.hpp"
#include "svarpg/simulate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace svarpg;
using namespace svarpg::testing;

namespace {

SvarModel ar1(double a, double w = 1.0) { return SvarModel({"X"}, {}, 1, {{"X", "X", 1, a}}, {{"X", w}}); }

/// Mean and batch-means standard error of x(t) * y(t - lag).
std::pair<double, double> lagged_product(const Eigen::MatrixXd& data, Eigen::Index x, Eigen::Index y, int lag, int batches) {
    const Eigen::Index T = data.rows() - lag;
    const Eigen::Index per = T / batches;
    std::vector<double> means;
    for (int b = 0; b < batches; ++b) {
        double s = 0.0;
        for (Eigen::Index t = b * per; t < (b + 1) * per; ++t) s += data(t + lag, x) * data(t, y);
        means.push_back(s / static_cast<double>(per));
    }
    double mean = 0.0;
    for (double v : means) mean += v;
    mean /= batches;
    double var = 0.0;
    for (double v : means) var += (v - mean) * (v - mean);
    var /= (batches - 1);
    return {mean, std::sqrt(var / batches)};
}

double median_relative_error(const SpectralMatrix& est, const SpectralMatrix& truth) {
    std::vector<double> errs;
    for (std::size_t j = 0; j < est.size(); ++j)
        errs.push_back(std::abs(est.values[j](0, 0) - truth.values[j](0, 0)) / std::abs(truth.values[j](0, 0)));
    std::nth_element(errs.begin(), errs.begin() + static_cast<long>(errs.size() / 2), errs.end());
    return errs[errs.size() / 2];
}

}  // namespace

TEST(Simulate, Ar1Variance) {
    const double a = 0.7;
    const std::size_t T = 200000;
    const auto tr = simulate(ar1(a), T, 42);
    ASSERT_EQ(tr.length(), T);
    const double var = tr.data.col(0).squaredNorm() / static_cast<double>(T);
    const double sigma2 = 1.0 / (1.0 - a * a);
    const double se = sigma2 * std::sqrt(2.0 * (1.0 + a * a) / ((1.0 - a * a) * static_cast<double>(T)));
    EXPECT_LT(std::abs(var - sigma2), 3.0 * se);
}

TEST(Simulate, ZeroNoiseIsZero) {
    const auto m = load_fixture("graph_c");
    const auto tr = simulate(m.with_noise_vars(Eigen::VectorXd::Zero(3)), 1000, 1);
    EXPECT_EQ(tr.data.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Simulate, Reproducible) {
    const auto m = load_fixture("fig9");
    const auto a = simulate(m, 5000, 99, 100);
    const auto b = simulate(m, 5000, 99, 100);
    EXPECT_EQ(a.data, b.data);
    EXPECT_EQ(a.seed, 99u);
    EXPECT_EQ(a.burn_in, 100u);
    EXPECT_NE(a.data, simulate(m, 5000, 100, 100).data);
    EXPECT_EQ(a.num_series(), 4u);
    EXPECT_EQ(a.observed_only().num_series(), 3u);
    EXPECT_EQ(a.observed_only().data, a.data.leftCols(3));
}

TEST(Simulate, CrossCovarianceGraphA) {
    const auto m = load_fixture("graph_a");
    const auto tr = simulate(m, 400000, 7);
    const auto acs = acs_via_sep(m, 2);
    const auto x = static_cast<Eigen::Index>(m.index_of("X"));
    const auto mm = static_cast<Eigen::Index>(m.index_of("M"));
    // E[M(t) X(t-1)] = C_{M,X}(1)
    const auto [mean, se] = lagged_product(tr.data, mm, x, 1, 100);
    EXPECT_LT(std::abs(mean - acs.at(1)(mm, x)), 3.0 * se) << mean << " vs " << acs.at(1)(mm, x);
}

TEST(Simulate, GraphBVariances) {
    const auto m = load_fixture("graph_b");
    const auto tr = simulate(m, 400000, 13);
    const auto c0 = acs_via_ma_infinity(m, 0, 2048).at(0);
    for (Eigen::Index v = 0; v < 4; ++v) {
        const auto [mean, se] = lagged_product(tr.data, v, v, 0, 100);
        EXPECT_LT(std::abs(mean - c0(v, v)), 3.0 * se) << v;
    }
}

TEST(Simulate, CyclicContemporaneousSolve) {
    const SvarModel m({"A", "B"}, {}, 0, {{"A", "B", 0, 0.5}, {"B", "A", 0, 0.4}}, {{"A", 1.0}, {"B", 1.0}});
    const auto tr = simulate(m, 200000, 5);
    const auto c0 = acs_via_ma_infinity(m, 0, 1).at(0);
    for (Eigen::Index v = 0; v < 2; ++v) {
        const auto [mean, se] = lagged_product(tr.data, v, v, 0, 100);
        EXPECT_LT(std::abs(mean - c0(v, v)), 3.0 * se);
    }
}

TEST(Simulate, Explosion) {
    try {
        (void)simulate(ar1(1.5), 10000, 1, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Explosion);
    }
}

TEST(Welch, WhiteNoiseFlat) {
    const SvarModel m({"A"}, {}, 0, {}, {{"A", 1.0}});
    const auto est = welch_spectrum(simulate(m, 1u << 18, 3), 4096, 2048, 256);
    EXPECT_EQ(est.taper, "hann");
    EXPECT_EQ(est.bins_per_point, 15u);
    for (const auto& v : est.spectrum.values) EXPECT_NEAR(v(0, 0).real(), 1.0, 0.15);
}

TEST(Welch, Ar1AtZero) {
    const auto est = welch_spectrum(simulate(ar1(0.7), 1u << 20, 4), 4096, 2048, 256);
    EXPECT_NEAR(est.spectrum.values[0](0, 0).real(), 1.0 / 0.09, 0.1 / 0.09);
}

TEST(Welch, GraphCTargetSpectrum) {
    const auto m = load_fixture("graph_c");
    const auto est = welch_spectrum(simulate(m, 1u << 20, 5), 16384, 0, 256);
    EXPECT_EQ(est.segments, 64u);
    const auto s = spectral_density(m, 256);
    const auto y = static_cast<Eigen::Index>(m.index_of("Y"));
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double truth = s.values[j](y, y).real();
        EXPECT_LT(std::abs(est.spectrum.values[j](y, y).real() - truth) / truth, 0.10) << j;
    }
}

TEST(Welch, HermitianWithNonnegativeDiagonal) {
    const auto est = welch_spectrum(simulate(load_fixture("fig1"), 1u << 15, 6), 1024, 512, 64);
    for (const auto& v : est.spectrum.values) {
        EXPECT_LT((v - v.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            EXPECT_GE(v(i, i).real(), 0.0);
            EXPECT_EQ(v(i, i).imag(), 0.0);
        }
    }
}

TEST(Welch, TooShortAndBadParameters) {
    const auto tr = simulate(ar1(0.5), 1000, 1);
    try {
        (void)welch_spectrum(tr, 512, 0, 64);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooShort);
    }
    EXPECT_THROW((void)welch_spectrum(tr, 100, 0, 64), Error);
    EXPECT_THROW((void)welch_spectrum(tr, 128, 128, 64), Error);
}

TEST(Welch, ErrorShrinksWithLength) {
    const auto m = ar1(0.7);
    const auto truth = spectral_density(m, 64);
    const auto full = simulate(m, 1u << 19, 8);
    std::vector<double> errs;
    for (std::size_t T : {1u << 16, 1u << 17, 1u << 18, 1u << 19}) {
        Trajectory part = full;
        part.data = full.data.topRows(static_cast<Eigen::Index>(T));
        errs.push_back(median_relative_error(welch_spectrum(part, 1024, 512, 64).spectrum, truth));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_LT(errs[i], errs[i - 1]) << i;
}
