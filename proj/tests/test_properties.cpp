#include "support.hpp"

#include "svarpg/sep.hpp"
#include "svarpg/simulate.hpp"
#include "svarpg/spectral.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace svarpg;
using namespace svarpg::testing;

namespace {

constexpr int kCases = 200;

FiniteFilter random_filter(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::uniform_int_distribution<int> start(-3, 3), len(1, 5);
    std::normal_distribution<double> g;
    const int s = start(rng);
    FiniteFilter f(rows, cols, s, s + len(rng) - 1);
    for (int k = f.start(); k <= f.end(); ++k)
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) f.ref(k)(i, j) = g(rng);
    return f;
}

double grid_diff(const TransferGrid& a, const TransferGrid& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, (a.values[j] - b.values[j]).cwiseAbs().maxCoeff());
    return d;
}

TransferGrid pointwise(const TransferGrid& a, const TransferGrid& b, bool conjugate_b) {
    TransferGrid out{a.omega, {}};
    for (std::size_t j = 0; j < a.size(); ++j)
        out.values.push_back(a.values[j] * (conjugate_b ? Eigen::MatrixXcd(b.values[j].conjugate()) : b.values[j]));
    return out;
}

}  // namespace

TEST(Property, SpectraHermitianPsd) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < kCases; ++i) {
        const auto m = random_model(rng);
        const auto s = spectral_density(m, 32);
        for (const auto& v : s.values) {
            ASSERT_LT((v - v.adjoint()).cwiseAbs().maxCoeff(), 1e-10) << m.serialize();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(v);
            ASSERT_GT(es.eigenvalues().minCoeff(), -1e-8 * std::max(1.0, es.eigenvalues().maxCoeff())) << m.serialize();
        }
    }
}

TEST(Property, AcsSymmetryAndPsd) {
    std::mt19937_64 rng(103);
    for (int i = 0; i < kCases; ++i) {
        const auto m = random_model(rng);
        const auto acs = acs_via_sep(m, 4, 512);
        const auto c0 = acs.at(0);
        ASSERT_LT((c0 - c0.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c0);
        ASSERT_GT(es.eigenvalues().minCoeff(), -1e-8);
        for (int tau = 1; tau <= 4; ++tau) ASSERT_EQ(acs.at(-tau), acs.at(tau).transpose());
        // Block Toeplitz matrix of C(0..4) is a covariance matrix too.
        const auto n = c0.rows();
        Eigen::MatrixXd big(5 * n, 5 * n);
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) big.block(a * n, b * n, n, n) = acs.at(a - b);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(big);
        ASSERT_GT(eb.eigenvalues().minCoeff(), -1e-8);
        const auto ma = acs_via_ma_infinity(m, 4, 2048);
        for (int tau = 0; tau <= 4; ++tau) ASSERT_LT((acs.at(tau) - ma.at(tau)).cwiseAbs().maxCoeff(), 1e-8) << m.serialize();
    }
}

TEST(Property, FourierHomomorphism) {
    std::mt19937_64 rng(107);
    for (int i = 0; i < kCases; ++i) {
        const auto a = random_filter(rng, 2, 3);
        const auto b = random_filter(rng, 3, 2);
        const auto c = random_filter(rng, 2, 3);
        const int N = 16;
        EXPECT_LT(grid_diff(fourier(convolve(a, b), N), pointwise(fourier(a, N), fourier(b, N), false)), 1e-12);
        // Tilted convolution becomes multiplication by the conjugate.
        const auto ct = c.transpose();
        EXPECT_LT(grid_diff(fourier(tilted_convolve(a, ct), N), pointwise(fourier(a, N), fourier(ct, N), true)), 1e-12);
        EXPECT_LT(grid_diff(fourier(a + c, N),
                            [&] {
                                auto fa = fourier(a, N);
                                const auto fc = fourier(c, N);
                                for (std::size_t j = 0; j < fa.size(); ++j) fa.values[j] += fc.values[j];
                                return fa;
                            }()),
                  1e-12);
    }
}

TEST(Property, ConvolutionAlgebra) {
    std::mt19937_64 rng(109);
    for (int i = 0; i < kCases; ++i) {
        const auto a = random_filter(rng, 2, 2);
        const auto b = random_filter(rng, 2, 2);
        const auto c = random_filter(rng, 2, 2);
        EXPECT_LT((convolve(convolve(a, b), c) - convolve(a, convolve(b, c))).max_abs(), 1e-12);
        EXPECT_LT((convolve(a, b + c) - (convolve(a, b) + convolve(a, c))).max_abs(), 1e-12);
        EXPECT_EQ((convolve(a, FiniteFilter::identity(2)) - a).max_abs(), 0.0);
        EXPECT_EQ((convolve(FiniteFilter::identity(2), a) - a).max_abs(), 0.0);
        // (a *^ b)(-v) = ((b^T *^ a^T)(v))^T
        const auto t1 = tilted_convolve(a, b);
        const auto t2 = tilted_convolve(b.transpose(), a.transpose());
        for (int v = -10; v <= 10; ++v) EXPECT_LT((t1.at(-v) - t2.at(v).transpose()).cwiseAbs().maxCoeff(), 1e-12);
        const auto sa = random_filter(rng, 1, 1);
        const auto sb = random_filter(rng, 1, 1);
        EXPECT_LT((convolve(sa, sb) - convolve(sb, sa)).max_abs(), 1e-12);
    }
}

TEST(Property, SeedReproducibility) {
    std::mt19937_64 rng(113);
    for (int i = 0; i < kCases; ++i) {
        const auto m = random_model(rng);
        const std::uint64_t seed = rng();
        const auto a = simulate(m, 300, seed, 50);
        const auto b = simulate(m, 300, seed, 50);
        ASSERT_EQ(a.data, b.data);
        ASSERT_TRUE(a.data.allFinite());
    }
}
