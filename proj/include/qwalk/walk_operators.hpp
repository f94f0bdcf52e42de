#pragma once

#include <optional>
#include <span>

#include "qwalk/types.hpp"

namespace qwalk {

/// Gain/loss exponents of the first and second half step.
struct GainLossPair {
    double gamma1 = 0.0;
    double gamma2 = 0.0;

    // U1 applies G(-gamma) in the first half step and G(+gamma) in the second;
    // U2 applies G(+gamma) in both.
    static GainLossPair for_kind(WalkKind kind, double gamma)
    {
        return kind == WalkKind::u1_pt ? GainLossPair{-gamma, gamma} : GainLossPair{gamma, gamma};
    }
};

struct WalkProvenance {
    WalkKind kind;
    CoinField field;
    double gamma;
};

/// Dense 2N x 2N operator on the lattice Hilbert space (basis index 2n + s).
struct WalkOperator {
    Matrix matrix;
    LatticeSpec lattice;
    std::optional<WalkProvenance> provenance;
};

struct BlochMatrix {
    Matrix2 matrix;
    double momentum = 0.0;
};

enum class PositionMap { identity, reflect };
enum class SymmetryKind { parity, time_reversal, parity_time };

/// A = (position map) x (coin_part), followed by complex conjugation when
/// `conjugate` is set. Covers P, T, PT and any generic A = U K that is local
/// in coin space.
struct SymmetryAction {
    Matrix2 coin_part;
    PositionMap position_map = PositionMap::identity;
    bool conjugate = false;
    LatticeSpec lattice{1};
};

std::string to_string(SymmetryKind kind);
SymmetryKind symmetry_kind_from_string(const std::string& name);

// Coin-space elements.
Matrix2 coin_2x2(double theta);
Matrix2 shift_2x2(double k);
Matrix2 gainloss_2x2(double gamma);
Matrix2 pauli(int index);

// Position-space elements.
WalkOperator build_coin(std::span<const double> angles, const LatticeSpec& lattice);
WalkOperator build_coin(const CoinField& field, int which, const LatticeSpec& lattice);
WalkOperator build_shift(const LatticeSpec& lattice);
WalkOperator build_gainloss(double gamma, const LatticeSpec& lattice);

/// U1 = S G(+g) C(theta2) S G(-g) C(theta1), U2 = S G(+g) C(theta2) S G(+g) C(theta1).
WalkOperator compose_walk(WalkKind kind, const CoinField& field, double gamma,
                          const LatticeSpec& lattice);

/// Same operator built from explicit dense products of the elemental matrices.
/// Slow; kept as the reference path for compose_walk.
WalkOperator compose_walk_reference(WalkKind kind, const CoinField& field, double gamma,
                                    const LatticeSpec& lattice);

BlochMatrix bloch_matrix(const GainLossPair& gains, double theta1, double theta2, double k);
BlochMatrix bloch_matrix(WalkKind kind, double theta1, double theta2, double gamma, double k);

/// e^{i theta1/2 sigma_1} U(k) e^{-i theta1/2 sigma_1}.
BlochMatrix timeframe_transform(const BlochMatrix& b, double theta1);

/// Block-diagonal C(theta1(n)/2): the similarity that carries U into its
/// symmetry time frame U' = W U W^{-1}. Unitary.
Matrix frame_rotation(const CoinField& field, const LatticeSpec& lattice);

/// U' = W U W^{-1}. Requires provenance (the coin field fixes W).
WalkOperator symmetry_frame(const WalkOperator& u);

SymmetryAction build_symmetry(SymmetryKind kind, const LatticeSpec& lattice);

/// A x for a 2N-vector.
Vector apply_symmetry(const SymmetryAction& a, const Vector& x);
/// A M A^{-1} for a 2N x 2N matrix.
Matrix apply_symmetry(const SymmetryAction& a, const Matrix& m);

/// Unitary part Q of A = Q K^c as a dense 2N x 2N matrix.
Matrix symmetry_unitary(const SymmetryAction& a);

/// Copy of `field` with theta_i(n) = theta_i(-n) enforced (site n <= N/2 wins).
CoinField symmetrize_reflection(const CoinField& field);

}  // namespace qwalk
