#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwalk/dispersion.hpp"
#include "qwalk/spectral.hpp"

using namespace qwalk;

namespace {

const double g11 = std::log(1.1);
const double g22 = std::log(2.2);

}  // namespace

TEST(Dispersion, FrozenValuesU1)
{
    EXPECT_NEAR(dispersion_rhs_u1(pi / 3, -pi / 12, g11, 0.0).real(), 0.7111913863851644, 1e-13);
    EXPECT_NEAR(dispersion_rhs_u1(pi / 3, -pi / 12, g22, 0.0).real(), 1.0485464320750097, 1e-13);
    EXPECT_EQ(dispersion_rhs_u1(pi / 3, -pi / 12, g11, 0.0).imag(), 0.0);
}

TEST(Dispersion, FrozenValueU2)
{
    const Complex rhs = dispersion_rhs_u2(pi / 3, -pi / 12, g11, pi / 4);
    EXPECT_NEAR(rhs.real(), 0.2241438680420134, 1e-13);
    EXPECT_NEAR(rhs.imag(), 0.09262111073982583, 1e-13);
}

TEST(Dispersion, AgreesWithOracle)
{
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> angle(-pi, pi), gain(-1.5, 1.5);
    for (int trial = 0; trial < 500; ++trial) {
        const double t1 = angle(gen), t2 = angle(gen), g = gain(gen), k = angle(gen);
        EXPECT_NEAR(dispersion_rhs_u1(t1, t2, g, k).real(), oracle::cos_eps_u1(t1, t2, g, k), 1e-12);
        EXPECT_LT(std::abs(dispersion_rhs_u2(t1, t2, g, k) - oracle::cos_eps_u2(t1, t2, g, k)), 1e-12);
    }
}

TEST(Dispersion, UnitaryLimitIsReal)
{
    for (double k : momentum_grid(64)) {
        const auto p1 = dispersion_u1(pi / 3, -pi / 12, 0.0, k);
        const auto p2 = dispersion_u2(pi / 3, -pi / 12, 0.0, k);
        EXPECT_EQ(p1.eps_plus.imag(), 0.0);
        EXPECT_EQ(p2.eps_plus.imag(), 0.0);
        EXPECT_EQ(p1.eps_plus, p2.eps_plus);
    }
}

TEST(Dispersion, BandsAreNegatives)
{
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> angle(-pi, pi), gain(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = dispersion(trial % 2 ? WalkKind::u1_pt : WalkKind::u2_trs, angle(gen), angle(gen), gain(gen),
                                  angle(gen));
        // cos is even, so both bands solve the same relation.
        EXPECT_LT(std::abs(std::cos(p.eps_plus) - p.cos_eps), 1e-10);
        EXPECT_LT(std::abs(std::cos(p.eps_minus) - p.cos_eps), 1e-10);
        EXPECT_GT(p.eps_minus.real(), -pi);
        EXPECT_LE(p.eps_minus.real(), pi);
        EXPECT_EQ(p.eps_minus.imag(), -p.eps_plus.imag());
    }
}

TEST(Dispersion, ComplexExactlyWhereRhsExceedsOne)
{
    const auto scan = band_scan(WalkKind::u1_pt, pi / 3, -pi / 12, g22, 512);
    int complex_points = 0;
    for (const auto& p : scan.points) {
        const bool outside = std::abs(p.cos_eps.real()) > 1.0;
        EXPECT_EQ(p.eps_plus.imag() != 0.0, outside) << "k=" << p.k;
        complex_points += outside;
    }
    EXPECT_GT(complex_points, 0);
    EXPECT_LT(complex_points, 512);
}

TEST(Dispersion, BlochEigenvaluesFollowQuasiEnergy)
{
    // lambda = e^{-i eps} solves lambda^2 - 2 cos(eps) lambda + 1 = 0.
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> angle(-pi, pi), gain(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double t1 = angle(gen), t2 = angle(gen), g = gain(gen), k = angle(gen);
        const auto p = dispersion_u2(t1, t2, g, k);
        const auto [a, b] = oracle::unimodular_roots(oracle::cos_eps_u2(t1, t2, g, k));
        const Complex lp = std::exp(Complex(0, -1) * p.eps_plus), lm = std::exp(Complex(0, -1) * p.eps_minus);
        EXPECT_LT(oracle::multiset_distance({lp, lm}, {a, b}), 1e-7);
    }
}

TEST(MomentumGrid, Shape)
{
    const auto k = momentum_grid(4);
    ASSERT_EQ(k.size(), 4u);
    EXPECT_NEAR(k[0], -pi / 2, 1e-15);
    EXPECT_NEAR(k[3], pi, 1e-15);
    const auto km = lattice_momenta(4);
    EXPECT_NEAR(km[0], 0.0, 1e-15);
    EXPECT_NEAR(km[2], pi, 1e-15);
    EXPECT_NEAR(km[3], -pi / 2, 1e-15);
    EXPECT_THROW(band_scan(WalkKind::u1_pt, 0, 0, 0, 1), std::invalid_argument);
}

TEST(BandScan, ParallelEqualsSerial)
{
    for (auto kind : {WalkKind::u1_pt, WalkKind::u2_trs}) {
        const auto a = band_scan(kind, pi / 4, pi / 20, g11, 1000);
        const auto b = band_scan_serial(kind, pi / 4, pi / 20, g11, 1000);
        ASSERT_EQ(a.points.size(), b.points.size());
        for (std::size_t j = 0; j < a.points.size(); ++j) {
            EXPECT_EQ(a.points[j].eps_plus, b.points[j].eps_plus);
            EXPECT_EQ(a.points[j].eps_minus, b.points[j].eps_minus);
        }
    }
}

TEST(BandScan, FullyRealBelowThreshold)
{
    const auto scan = band_scan(WalkKind::u1_pt, pi / 3, -pi / 12, g11, 512);
    EXPECT_LE(scan.max_abs_imag(), 1e-12);
}

TEST(CriticalGain, MatchesClosedForm)
{
    const auto g = critical_gain_u1(pi / 3, -pi / 12);
    ASSERT_TRUE(g.has_value());
    EXPECT_NEAR(std::exp(*g), 2.0941372165357435, 1e-9);
    EXPECT_NEAR(*g, oracle::critical_gamma_u1(pi / 3, -pi / 12), 1e-11);

    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int trial = 0; trial < 100; ++trial) {
        const double t1 = angle(gen), t2 = angle(gen);
        const auto c = critical_gain_u1(t1, t2);
        ASSERT_TRUE(c.has_value());
        EXPECT_NEAR(*c, oracle::critical_gamma_u1(t1, t2), 1e-9) << t1 << " " << t2;
    }
}

TEST(CriticalGain, DegenerateAngles)
{
    EXPECT_FALSE(critical_gain_u1(0.0, 0.4).has_value());
    EXPECT_FALSE(critical_gain_u1(0.3, pi).has_value());
    // |cos cos| + |sin sin| = 1 at gamma = 0 when t1 = t2.
    EXPECT_EQ(critical_gain_u1(0.7, 0.7).value(), 0.0);
}

TEST(CriticalGain, ScanStraddlesThreshold)
{
    const double gc = *critical_gain_u1(pi / 3, -pi / 12);
    EXPECT_EQ(band_scan(WalkKind::u1_pt, pi / 3, -pi / 12, 0.99 * gc, 512).max_abs_imag(), 0.0);
    EXPECT_GT(band_scan(WalkKind::u1_pt, pi / 3, -pi / 12, 1.01 * gc, 512).max_abs_imag(), 0.0);
}

TEST(BlochLattice, SmallLattices)
{
    for (auto kind : {WalkKind::u1_pt, WalkKind::u2_trs})
        for (int n : {1, 2, 3, 8}) {
            const auto check = verify_bloch_vs_lattice(kind, pi / 3, -pi / 12, g11, n, 1e-8);
            EXPECT_TRUE(check.passed) << "N=" << n << " mismatch " << check.max_mismatch;
        }
}

TEST(BlochLattice, DetectsWrongDispersion)
{
    // U1 lattice against U2 bands must not match.
    const LatticeSpec lattice(8);
    const auto u = compose_walk(WalkKind::u1_pt, CoinField::homogeneous(8, pi / 3, -pi / 12), g11, lattice);
    const auto wrong = oracle::bloch_eigenvalues(false, pi / 3, -pi / 12, g11, 8);
    EXPECT_GT(multiset_mismatch(eigendecompose(u).eigenvalues, wrong), 1e-3);
}

TEST(Elemental, AllRowsBelowTolerance)
{
    const auto report = verify_elemental_relations();
    EXPECT_EQ(report.relations.size(), 11u);
    for (const auto& r : report.relations) {
        EXPECT_LT(r.max_residual, 1e-14) << r.name;
        EXPECT_EQ(r.samples, 11 * 11 * 11) << r.name;
    }
    EXPECT_TRUE(report.passed());
    EXPECT_GT(report.parity_gainloss_breaking, 1.0);
}
