#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwalk/disorder.hpp"
#include "qwalk/spectral.hpp"

using namespace qwalk;

namespace {

double eig_residual(const Matrix& u, const Spectrum& s)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        worst = std::max(worst, (u * s.vector(j) - s.eigenvalues[j] * s.vector(j)).norm());
    return worst;
}

}  // namespace

TEST(Eigendecompose, DiagonalMatrix)
{
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = Complex(0, 1);
    m(1, 1) = -1.0;
    m(2, 2) = 2.0;
    const auto s = eigendecompose(m);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_LT(oracle::multiset_distance(s.eigenvalues, {Complex(0, 1), -1.0, 2.0}), 1e-14);
    for (std::size_t j = 0; j < 3; ++j)
        EXPECT_NEAR(s.vector(j).norm(), 1.0, 1e-14);
}

TEST(Eigendecompose, PhaseConventionAndOrdering)
{
    std::mt19937_64 gen(1);
    const Matrix m = Matrix::Random(12, 12);
    const auto s = eigendecompose(m);
    EXPECT_LT(eig_residual(m, s), 1e-10 * m.norm());
    for (std::size_t j = 0; j < s.size(); ++j) {
        const Vector v = s.vector(j);
        Eigen::Index at;
        v.cwiseAbs().maxCoeff(&at);
        EXPECT_GT(v(at).real(), 0.0);
        EXPECT_NEAR(v(at).imag(), 0.0, 1e-15);
        if (j > 0)
            EXPECT_LE(std::arg(s.eigenvalues[j - 1]), std::arg(s.eigenvalues[j]) + 1e-15);
    }
}

TEST(Eigendecompose, RejectsNonSquareAndEmpty)
{
    EXPECT_THROW(eigendecompose(Matrix(Matrix::Zero(2, 3))), DimensionError);
    EXPECT_THROW(eigendecompose(Matrix(0, 0)), DimensionError);
}

TEST(Eigendecompose, HomogeneousWalkMatchesBlochOracle)
{
    for (bool pt : {true, false}) {
        const int n = 16;
        const double g = std::log(1.1);
        const auto u = compose_walk(pt ? WalkKind::u1_pt : WalkKind::u2_trs,
                                    CoinField::homogeneous(n, pi / 3, -pi / 12), g, LatticeSpec(n));
        const auto s = eigendecompose(u);
        EXPECT_LT(eig_residual(u.matrix, s), 1e-11);
        EXPECT_LT(oracle::multiset_distance(s.eigenvalues, oracle::bloch_eigenvalues(pt, pi / 3, -pi / 12, g, n)),
                  1e-9);
    }
}

TEST(QuasiEnergy, PrincipalBranch)
{
    EXPECT_NEAR(quasi_energy(1.0).epsilon.real(), 0.0, 1e-15);
    EXPECT_NEAR(quasi_energy(Complex(0, -1)).epsilon.real(), pi / 2, 1e-15);
    EXPECT_NEAR(quasi_energy(-1.0).epsilon.real(), pi, 1e-15);
    // Im eps = ln |lambda| from eps = i log lambda.
    EXPECT_NEAR(quasi_energy(std::polar(2.0, -0.3)).epsilon.imag(), std::log(2.0), 1e-15);
    EXPECT_NEAR(quasi_energy(std::polar(2.0, -0.3)).epsilon.real(), 0.3, 1e-15);
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> arg(-pi, pi), mod(0.1, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Complex lambda = std::polar(mod(gen), arg(gen));
        const Complex eps = quasi_energy(lambda).epsilon;
        EXPECT_GT(eps.real(), -pi);
        EXPECT_LE(eps.real(), pi);
        EXPECT_LT(std::abs(std::exp(Complex(0, -1) * eps) - lambda), 1e-13);
    }
}

TEST(ClassifyReality, CountsOffCircle)
{
    const std::vector<Complex> eigs{1.0, Complex(0, 1), std::polar(1.0 + 1e-9, 0.4), 1.2, 0.5};
    const auto r = classify_reality(eigs, 1e-8);
    EXPECT_EQ(r.num_complex, 2);
    EXPECT_DOUBLE_EQ(r.complex_fraction, 0.4);
    EXPECT_NEAR(r.max_modulus_deviation, 0.5, 1e-15);
    EXPECT_EQ(r.tolerance_used, 1e-8);
    EXPECT_TRUE(r.on_circle[2]);
    EXPECT_FALSE(r.on_circle[3]);
}

TEST(ClassifyReality, InvalidInputsThrow)
{
    EXPECT_THROW(quasi_energy(0.0), SingularSpectrumError);
    EXPECT_THROW(classify_reality(std::vector<Complex>{1.0}, 0.0), std::invalid_argument);
    EXPECT_THROW(spectral_pairing_defect({1.0, 0.0}), SingularSpectrumError);
}

TEST(ClassifyReality, UnitaryWalkIsReal)
{
    std::mt19937_64 gen(9);
    const int n = 20;
    const auto u = compose_walk(WalkKind::u2_trs, {oracle::random_angles(gen, n), oracle::random_angles(gen, n)},
                                0.0, LatticeSpec(n));
    const auto r = classify_reality(eigendecompose(u), 1e-10);
    EXPECT_EQ(r.num_complex, 0);
    EXPECT_LT(r.max_modulus_deviation, 1e-12);
}

TEST(AntiunitaryRelation, HomogeneousU1PT)
{
    const LatticeSpec lattice(30);
    const auto u = compose_walk(WalkKind::u1_pt, CoinField::homogeneous(30, pi / 3, -pi / 12), std::log(1.1), lattice);
    EXPECT_LT(check_antiunitary_relation(u, build_symmetry(SymmetryKind::parity_time, lattice)), 1e-12);
    EXPECT_GT(check_antiunitary_relation(u, build_symmetry(SymmetryKind::time_reversal, lattice)), 0.01);
}

TEST(AntiunitaryRelation, DisorderedU2T)
{
    std::mt19937_64 gen(10);
    const int n = 25;
    const LatticeSpec lattice(n);
    for (int trial = 0; trial < 5; ++trial) {
        const auto u = compose_walk(WalkKind::u2_trs, {oracle::random_angles(gen, n), oracle::random_angles(gen, n)},
                                    0.4, lattice);
        EXPECT_LT(check_antiunitary_relation(u, build_symmetry(SymmetryKind::time_reversal, lattice)), 1e-12);
    }
}

TEST(AntiunitaryRelation, FrameMatters)
{
    const LatticeSpec lattice(10);
    const auto u = compose_walk(WalkKind::u2_trs, CoinField::homogeneous(10, pi / 3, -pi / 12), 0.2, lattice);
    const auto t = build_symmetry(SymmetryKind::time_reversal, lattice);
    EXPECT_LT(check_antiunitary_relation(u, t, TimeFrame::symmetric), 1e-12);
    EXPECT_GT(check_antiunitary_relation(u, t, TimeFrame::as_built), 1e-3);
}

TEST(AntiunitaryRelation, SymmetrizedDisorderU1PT)
{
    std::mt19937_64 gen(12);
    for (int n : {9, 12}) {
        const LatticeSpec lattice(n);
        const auto field = symmetrize_reflection({oracle::random_angles(gen, n), oracle::random_angles(gen, n)});
        const auto u = compose_walk(WalkKind::u1_pt, field, 0.3, lattice);
        EXPECT_LT(check_antiunitary_relation(u, build_symmetry(SymmetryKind::parity_time, lattice)), 1e-12);
    }
}

TEST(AntiunitaryRelation, UnitarySymmetryComparesWithU)
{
    const LatticeSpec lattice(4);
    const SymmetryAction identity{pauli(0), PositionMap::identity, false, lattice};
    const Matrix m = Matrix::Random(8, 8);
    EXPECT_LT(check_antiunitary_relation(m, identity), 1e-15);
}

TEST(AntiunitaryRelation, SingularOperatorThrows)
{
    const LatticeSpec lattice(2);
    const auto t = build_symmetry(SymmetryKind::time_reversal, lattice);
    EXPECT_THROW(check_antiunitary_relation(Matrix(Matrix::Zero(4, 4)), t), SingularityError);
}

TEST(EigenvectorSymmetry, UnitaryRealSpectrumHasSymmetricVectors)
{
    DisorderSpec spec;
    spec.disorder_case = DisorderCase::D;
    spec.mean_theta1 = pi / 4;
    spec.theta2 = pi / 20;
    spec.gamma_exp = 1.0;
    spec.lattice = LatticeSpec(16);
    spec.master_seed = 3;
    const auto field = sample_coin_field(spec, 0);
    const auto u = compose_walk(WalkKind::u2_trs, field, 0.0, spec.lattice);
    const auto framed = to_symmetry_frame(eigendecompose(u), field, spec.lattice);
    const auto rep = check_eigenvector_symmetry(framed, build_symmetry(SymmetryKind::time_reversal, spec.lattice));
    EXPECT_LT(rep.max_residual(), 1e-8);
    EXPECT_EQ(rep.deltas.size(), 32u);
}

TEST(EigenvectorSymmetry, BrokenPhaseDetected)
{
    // Homogeneous U2 at gamma > 0 has almost all eigenvalues off the circle,
    // so T cannot map eigenvectors to themselves.
    const LatticeSpec lattice(12);
    const auto field = CoinField::homogeneous(12, pi / 3, -pi / 12);
    const auto u = compose_walk(WalkKind::u2_trs, field, std::log(1.1), lattice);
    const auto framed = to_symmetry_frame(eigendecompose(u), field, lattice);
    const auto rep = check_eigenvector_symmetry(framed, build_symmetry(SymmetryKind::time_reversal, lattice));
    EXPECT_GT(rep.max_residual(), 1e-3);
}

TEST(EigenvectorSymmetry, DegenerateSubspaceHandled)
{
    // Identity has a single degenerate group spanning the whole space.
    const LatticeSpec lattice(3);
    const auto s = eigendecompose(Matrix(Matrix::Identity(6, 6)));
    const auto rep = check_eigenvector_symmetry(s, build_symmetry(SymmetryKind::time_reversal, lattice));
    ASSERT_EQ(rep.degenerate_groups.size(), 1u);
    EXPECT_EQ(rep.degenerate_groups[0].indices.size(), 6u);
    EXPECT_LT(rep.max_residual(), 1e-12);
    EXPECT_TRUE(std::isnan(rep.deltas[0]));
}

TEST(SpectralPairing, Examples)
{
    EXPECT_LT(spectral_pairing_defect({2.0, 0.5, Complex(0, 1)}), 1e-15);
    EXPECT_GT(spectral_pairing_defect({2.0, 1.0}), 0.4);
    EXPECT_LT(spectral_pairing_defect({std::polar(3.0, 0.7), std::polar(1.0 / 3.0, 0.7)}), 1e-15);
}

TEST(SpectralPairing, PropertyOverSymmetricWalks)
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> gain(0.0, 0.8);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 6 + trial;
        const LatticeSpec lattice(n);
        const bool pt = trial % 2 == 0;
        CoinField field{oracle::random_angles(gen, n), oracle::random_angles(gen, n)};
        if (pt)
            field = symmetrize_reflection(field);
        const auto u = compose_walk(pt ? WalkKind::u1_pt : WalkKind::u2_trs, field, gain(gen), lattice);
        const auto a = build_symmetry(pt ? SymmetryKind::parity_time : SymmetryKind::time_reversal, lattice);
        ASSERT_LT(check_antiunitary_relation(u, a), 1e-10);
        EXPECT_LT(spectral_pairing_defect(eigendecompose(u).eigenvalues), 1e-6) << "trial " << trial;
    }
}

TEST(MultisetMismatch, MatchesPermutations)
{
    std::vector<Complex> a{1.0, Complex(0, 1), -1.0, Complex(0.3, -0.2)};
    std::vector<Complex> b{a[2], a[0], a[3], a[1]};
    EXPECT_EQ(multiset_mismatch(a, b), 0.0);
    b[1] += 1e-3;
    EXPECT_NEAR(multiset_mismatch(a, b), 1e-3, 1e-12);
    EXPECT_THROW(multiset_mismatch({1.0}, {1.0, 2.0}), DimensionError);
}
