#include "support.hpp"

#include "svarpg/error.hpp"
#include "svarpg/graph.hpp"
#include "svarpg/sep.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace svarpg;
using namespace svarpg::testing;

namespace {

SvarModel ar1(double a, double w = 1.0) { return SvarModel({"X"}, {}, 1, {{"X", "X", 1, a}}, {{"X", w}}); }

void expect_values(const FiniteFilter& f, const std::vector<double>& want, double tol) {
    for (std::size_t s = 0; s < want.size(); ++s) EXPECT_NEAR(f.scalar_at(static_cast<int>(s)), want[s], tol) << "lag " << s;
}

}  // namespace

TEST(Convolve, UnitIsNeutral) {
    const auto a = FiniteFilter::scalar({0.5, -1.0, 2.0}, 1);
    const auto c = convolve(a, FiniteFilter::identity(1));
    EXPECT_EQ(c.scalar_values(), a.scalar_values());
    EXPECT_EQ(c.start(), 1);
}

TEST(Convolve, Binomial) {
    const auto a = FiniteFilter::scalar({1.0, 1.0});
    const auto c = convolve(a, a);
    EXPECT_EQ(c.scalar_values(), (std::vector<double>{1.0, 2.0, 1.0}));
}

TEST(Convolve, GraphAPathAtLag3) {
    const auto m = load_fixture("graph_a");
    const auto xm = direct_effect_filter(m, m.index_of("X"), m.index_of("M"), 3);
    const auto my = direct_effect_filter(m, m.index_of("M"), m.index_of("Y"), 3);
    EXPECT_NEAR(convolve(xm, my).scalar_at(3), 0.09, 1e-15);
}

TEST(Convolve, DimensionMismatch) {
    const FiniteFilter a(2, 3, 0, 1), b(2, 2, 0, 1);
    try {
        (void)convolve(a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
    EXPECT_THROW((void)tilted_convolve(a, b), Error);
}

TEST(Convolve, WindowRestricts) {
    const auto a = FiniteFilter::scalar({1.0, 1.0});
    const auto c = convolve(a, a, LagWindow{1, 4});
    EXPECT_EQ(c.start(), 1);
    EXPECT_EQ(c.end(), 4);
    EXPECT_EQ(c.scalar_values(), (std::vector<double>{2.0, 1.0, 0.0, 0.0}));
}

TEST(TiltedConvolve, Examples) {
    const auto i = FiniteFilter::identity(1);
    EXPECT_EQ(tilted_convolve(i, i).scalar_values(), std::vector<double>{1.0});
    const auto a = FiniteFilter::scalar({1.0, 0.5});
    const auto t = tilted_convolve(a, a);
    EXPECT_EQ(t.start(), -1);
    EXPECT_EQ(t.end(), 1);
    EXPECT_DOUBLE_EQ(t.scalar_at(0), 1.25);
    EXPECT_DOUBLE_EQ(t.scalar_at(1), 0.5);
    EXPECT_DOUBLE_EQ(t.scalar_at(-1), 0.5);
}

TEST(TiltedConvolve, TransposeSymmetry) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    FiniteFilter a(2, 2, 0, 4);
    for (int s = 0; s <= 4; ++s)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) a.ref(s)(r, c) = g(rng);
    // (a *^ a)(-v) = ((a^T *^ a^T)(v))^T; for symmetric taps this is plain transposition.
    const auto t = tilted_convolve(a, a);
    const auto tt = tilted_convolve(a.transpose(), a.transpose());
    for (int v = -4; v <= 4; ++v) EXPECT_LT((t.at(-v) - tt.at(v).transpose()).cwiseAbs().maxCoeff(), 1e-14);
    FiniteFilter s(2, 2, 0, 4);
    for (int k = 0; k <= 4; ++k) s.ref(k) = a.at(k) + a.at(k).transpose();
    const auto ts = tilted_convolve(s, s);
    for (int v = -4; v <= 4; ++v) EXPECT_LT((ts.at(v) - ts.at(-v).transpose()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(DirectEffect, GraphAExamples) {
    const auto m = load_fixture("graph_a");
    expect_values(direct_effect_filter(m, m.index_of("M"), m.index_of("Y"), 3), {0.0, 0.3, 0.21, 0.147}, 1e-15);
    expect_values(direct_effect_filter(m, m.index_of("X"), m.index_of("M"), 3), {0.0, 0.3, 0.09, -0.123}, 1e-15);
    EXPECT_EQ(direct_effect_filter(m, m.index_of("X"), m.index_of("Y"), 3).max_abs(), 0.0);
}

TEST(DirectEffect, SelfPairRejected) {
    const auto m = load_fixture("graph_a");
    try {
        (void)direct_effect_filter(m, 0, 0, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SelfPair);
    }
}

TEST(DirectEffect, SumMatchesTransferAtZero) {
    const auto m = load_fixture("graph_a");
    const auto f = direct_effect_filter(m, m.index_of("M"), m.index_of("Y"), 200);
    double sum = 0.0;
    for (double v : f.scalar_values()) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(InternalDynamics, Examples) {
    expect_values(internal_dynamics_filter(ar1(0.7), 0, 3), {1.0, 0.7, 0.49, 0.343}, 1e-15);
    const auto m = load_fixture("graph_a");
    expect_values(internal_dynamics_filter(m, m.index_of("M"), 4), {1.0, 0.3, -0.41, -0.273, 0.1231}, 1e-15);
    const SvarModel w({"A"}, {}, 0, {}, {{"A", 1.0}});
    expect_values(internal_dynamics_filter(w, 0, 3), {1.0, 0.0, 0.0, 0.0}, 0.0);
}

TEST(InternalDynamics, AbsoluteSumBound) {
    for (const auto* name : {"graph_a", "graph_b", "graph_c", "fig1", "fig9"}) {
        const auto m = load_fixture(name);
        for (std::size_t v = 0; v < m.num_processes(); ++v) {
            double a = 0.0;
            for (double c : m.auto_coeffs(v)) a += std::abs(c);
            EXPECT_LE(internal_dynamics_filter(m, v, 512).l1_norm(), 1.0 / (1.0 - a) + 1e-12) << name;
        }
    }
}

TEST(LambdaInfinity, GraphAIsFinitePolynomial) {
    const auto m = load_fixture("graph_a");
    const int L = 64;
    const std::vector<std::size_t> all{0, 1, 2};
    const auto lam = effect_filter_matrix(m, all, L);
    const auto expected = FiniteFilter::identity(3).window(0, L) + lam + convolve(lam, lam, LagWindow{0, L});
    const auto got = lambda_infinity(m, L);
    EXPECT_LT((got - expected).max_abs(), 1e-15);
    EXPECT_NEAR(got.at(2, m.index_of("X"), m.index_of("Y")), 0.09, 1e-15);
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_EQ(got.at(0, i, i), 1.0);
}

TEST(LambdaInfinity, GraphCMatchesTruncatedPathSum) {
    const auto m = load_fixture("graph_c");
    const int L = 40;
    const auto z = m.index_of("Z"), y = m.index_of("Y");
    const auto li = lambda_infinity(m, L, 1e-15).entry(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(y));
    const auto g = process_graph(m).directed;
    // Each extra cycle traversal adds at least three lags, so depth 15 is exact up to lag 40.
    FiniteFilter sum(1, 1, 0, L);
    for (const auto& p : enumerate_paths(g, z, y, {}, 15)) sum += path_filter(m, p, L);
    EXPECT_LT((li - sum).max_abs(), 1e-13);
}

TEST(LambdaInfinity, NonConvergent) {
    const SvarModel m({"A", "B"}, {}, 1, {{"A", "B", 1, 0.9}, {"B", "A", 1, 1.2}}, {{"A", 1.0}, {"B", 1.0}});
    try {
        (void)lambda_infinity(m, 128);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonConvergent);
    }
}

TEST(LambdaInfinity, GeometricTailUnderAbsoluteBound) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        const auto m = random_model(rng);
        std::vector<std::size_t> all(m.num_processes());
        for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
        const auto lam = effect_filter_matrix(m, all, 64);
        auto pow = lam;
        double prev = pow.l1_norm();
        for (int k = 2; k <= 12; ++k) {
            pow = convolve(pow, lam, LagWindow{0, 64});
            const double cur = pow.l1_norm();
            if (prev > 1e-300) {
                EXPECT_LT(cur, prev * (1.0 + 1e-12));
            }
            prev = cur;
        }
    }
}

TEST(Ccf, AllOtherControlsGivesDirectFilter) {
    const auto m = load_fixture("graph_b");
    const auto x = m.index_of("X"), y = m.index_of("Y");
    const auto f = ccf(m, x, y, {m.index_of("Z"), m.index_of("M")}, 64);
    const auto d = direct_effect_filter(m, x, y, 64);
    EXPECT_LT((f - d).max_abs(), 1e-15);
}

TEST(Ccf, NoAvoidingPath) {
    const auto m = load_fixture("graph_a");
    EXPECT_EQ(ccf(m, m.index_of("X"), m.index_of("Y"), {m.index_of("M")}, 32).max_abs(), 0.0);
}

TEST(Ccf, Fig6MatchesUnrolled) {
    const auto m = load_fixture("fig6");
    const auto x = m.index_of("X"), y = m.index_of("Y");
    EXPECT_NEAR(ccf(m, x, y, {}, 32).scalar_at(4), unrolled_paths(m, x, y, {}, 4), 1e-12);
    const auto w = m.index_of("W");
    for (int s = 0; s <= 6; ++s)
        EXPECT_NEAR(ccf(m, x, y, {w}, 32).scalar_at(s), unrolled_paths(m, x, y, {w}, s), 1e-12);
}

TEST(Acs, Ar1ClosedForm) {
    const auto acs = acs_via_sep(ar1(0.7), 10, 256);
    EXPECT_NEAR(acs.at(0)(0, 0), 1.0 / 0.51, 1e-10);
    for (int tau = 0; tau <= 10; ++tau) EXPECT_NEAR(acs.at(tau)(0, 0), std::pow(0.7, tau) / 0.51, 1e-10);
    const auto ma = acs_via_ma_infinity(ar1(0.7), 10);
    EXPECT_NEAR(ma.at(0)(0, 0), 1.0 / 0.51, 1e-12);
    const auto psi = ma_infinity_filter(ar1(0.7), 3);
    EXPECT_NEAR(psi[2](0, 0), 0.49, 1e-15);
}

TEST(Acs, WhiteNoise) {
    const SvarModel m({"A", "B"}, {}, 0, {}, {{"A", 2.0}, {"B", 0.5}});
    const auto acs = acs_via_sep(m, 3, 8);
    EXPECT_TRUE(acs.at(0).isApprox((Eigen::Vector2d(2.0, 0.5)).asDiagonal().toDenseMatrix()));
    for (int tau = 1; tau <= 3; ++tau) EXPECT_TRUE(acs.at(tau).isZero());
}

TEST(Acs, Order0MaMatchesSem) {
    const SvarModel m({"A", "B", "C"}, {}, 0, {{"A", "B", 0, 0.5}, {"B", "C", 0, -0.4}, {"A", "C", 0, 0.2}},
                      {{"A", 1.0}, {"B", 2.0}, {"C", 0.5}});
    const Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(3, 3) - m.phi(0)).inverse();
    const Eigen::MatrixXd sigma = inv.transpose() * m.noise_vars().asDiagonal() * inv;
    EXPECT_LT((acs_via_ma_infinity(m, 0, 4).at(0) - sigma).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((acs_via_sep(m, 0, 8).at(0) - sigma).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Acs, SepMatchesMaInfinityGraphA) {
    const auto m = load_fixture("graph_a");
    const auto a = acs_via_sep(m, 10);
    const auto b = acs_via_ma_infinity(m, 10);
    for (int tau = 0; tau <= 10; ++tau) EXPECT_LT((a.at(tau) - b.at(tau)).cwiseAbs().maxCoeff(), 1e-8) << tau;
}

TEST(Acs, SepMatchesMaInfinityWithLatents) {
    for (const auto* name : {"fig1", "fig6", "fig9"}) {
        const auto m = load_fixture(name);
        const auto a = acs_via_sep(m, 10);
        const auto b = acs_via_ma_infinity(m, 10);
        for (int tau = 0; tau <= 10; ++tau) EXPECT_LT((a.at(tau) - b.at(tau)).cwiseAbs().maxCoeff(), 1e-8) << name;
    }
}

TEST(Acs, NegativeLagsTranspose) {
    const auto acs = acs_via_sep(load_fixture("graph_a"), 5);
    for (int tau = 1; tau <= 5; ++tau) EXPECT_EQ(acs.at(-tau), acs.at(tau).transpose());
    const auto f = acs.to_filter();
    EXPECT_EQ(f.start(), -5);
    EXPECT_EQ(f.at(-2), acs.at(-2));
}

TEST(TrekMonomial, SingleVertexIsProjectedInternal) {
    const auto m = load_fixture("fig9");
    const auto sep = sep_representation(m, 32);
    const auto y = m.index_of("Y");
    const Trek t{TrekKind::TopVertex, {{y}}, {{y}}};
    const auto f = trek_monomial_filter(sep, m, t);
    EXPECT_LT((f - sep.c_projected.entry(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(y))).max_abs(), 1e-15);
}

TEST(TrekMonomial, GraphAXToY) {
    const auto m = load_fixture("graph_a");
    const int L = 128;
    const auto sep = sep_representation(m, L);
    const auto x = m.index_of("X"), mm = m.index_of("M"), y = m.index_of("Y");
    const Trek t{TrekKind::TopVertex, {{x}}, {{x, mm, y}}};
    const auto f = trek_monomial_filter(sep, m, t);
    const auto acs = acs_from_sep(sep, m, 6);
    for (int tau = 0; tau <= 6; ++tau)
        EXPECT_NEAR(f.scalar_at(tau), acs.at(tau)(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)), 1e-10);
}
