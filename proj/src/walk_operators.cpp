#include "qwalk/walk_operators.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {

constexpr Complex I{0.0, 1.0};

// Rows of the two internal states of `site`, as a 2 x cols block.
auto site_rows(Matrix& m, int site) { return m.middleRows(2 * site, 2); }
auto site_rows(const Matrix& m, int site) { return m.middleRows(2 * site, 2); }

void left_apply_blocks(Matrix& m, std::span<const Matrix2> blocks)
{
    for (int n = 0; n < static_cast<int>(blocks.size()); ++n) {
        Eigen::Matrix<Complex, 2, Eigen::Dynamic> rows = site_rows(m, n);
        site_rows(m, n).noalias() = blocks[n] * rows;
    }
}

void left_apply_gainloss(Matrix& m, double gamma)
{
    const double up = std::exp(gamma), down = std::exp(-gamma);
    for (int n = 0; 2 * n < m.rows(); ++n) {
        m.row(2 * n) *= up;
        m.row(2 * n + 1) *= down;
    }
}

Matrix left_apply_shift(const Matrix& m, const LatticeSpec& lattice)
{
    Matrix out(m.rows(), m.cols());
    for (int n = 0; n < lattice.num_sites(); ++n) {
        out.row(2 * lattice.wrap(n - 1)) = m.row(2 * n);
        out.row(2 * lattice.wrap(n + 1) + 1) = m.row(2 * n + 1);
    }
    return out;
}

std::vector<Matrix2> coin_blocks(std::span<const double> angles)
{
    std::vector<Matrix2> blocks;
    blocks.reserve(angles.size());
    for (double t : angles)
        blocks.push_back(coin_2x2(t));
    return blocks;
}

int target_site(const SymmetryAction& a, int site)
{
    return a.position_map == PositionMap::reflect ? a.lattice.reflect(site) : site;
}

// Q M for the unitary part Q of the action.
Matrix left_apply_unitary(const SymmetryAction& a, const Matrix& m)
{
    Matrix out(m.rows(), m.cols());
    for (int n = 0; n < a.lattice.num_sites(); ++n)
        site_rows(out, target_site(a, n)).noalias() = a.coin_part * site_rows(m, n);
    return out;
}

void check_dimension(const SymmetryAction& a, Eigen::Index rows, Eigen::Index cols)
{
    if (rows != a.lattice.dimension() || cols != a.lattice.dimension())
        throw DimensionError("symmetry action on lattice of dimension "
                             + std::to_string(a.lattice.dimension()) + " applied to "
                             + std::to_string(rows) + "x" + std::to_string(cols) + " operand");
}

}  // namespace

bool CoinField::is_homogeneous() const
{
    auto all_equal = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
    };
    return all_equal(theta1) && all_equal(theta2);
}

void CoinField::check(const LatticeSpec& lattice) const
{
    const auto n = static_cast<std::size_t>(lattice.num_sites());
    if (theta1.size() != n || theta2.size() != n)
        throw DimensionError("coin field has " + std::to_string(theta1.size()) + "/"
                             + std::to_string(theta2.size()) + " angles for a lattice of "
                             + std::to_string(n) + " sites");
}

std::string to_string(WalkKind kind)
{
    return kind == WalkKind::u1_pt ? "u1" : "u2";
}

WalkKind walk_kind_from_string(const std::string& name)
{
    if (name == "u1" || name == "U1" || name == "u1_pt")
        return WalkKind::u1_pt;
    if (name == "u2" || name == "U2" || name == "u2_trs")
        return WalkKind::u2_trs;
    throw std::invalid_argument("unknown walk kind '" + name + "' (expected u1 or u2)");
}

std::string to_string(SymmetryKind kind)
{
    switch (kind) {
    case SymmetryKind::parity: return "p";
    case SymmetryKind::time_reversal: return "t";
    case SymmetryKind::parity_time: return "pt";
    }
    return "?";
}

SymmetryKind symmetry_kind_from_string(const std::string& name)
{
    if (name == "p" || name == "P")
        return SymmetryKind::parity;
    if (name == "t" || name == "T")
        return SymmetryKind::time_reversal;
    if (name == "pt" || name == "PT")
        return SymmetryKind::parity_time;
    throw std::invalid_argument("unknown symmetry '" + name + "' (expected p, t or pt)");
}

Matrix2 coin_2x2(double theta)
{
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix2 m;
    m << c, I * s, I * s, c;
    return m;
}

Matrix2 shift_2x2(double k)
{
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = std::polar(1.0, k);
    m(1, 1) = std::polar(1.0, -k);
    return m;
}

Matrix2 gainloss_2x2(double gamma)
{
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = std::exp(gamma);
    m(1, 1) = std::exp(-gamma);
    return m;
}

Matrix2 pauli(int index)
{
    Matrix2 m;
    switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli index must be 0..3");
    }
    return m;
}

WalkOperator build_coin(std::span<const double> angles, const LatticeSpec& lattice)
{
    if (static_cast<int>(angles.size()) != lattice.num_sites())
        throw DimensionError("coin has " + std::to_string(angles.size())
                             + " angles for a lattice of " + std::to_string(lattice.num_sites())
                             + " sites");
    Matrix m = Matrix::Zero(lattice.dimension(), lattice.dimension());
    for (int n = 0; n < lattice.num_sites(); ++n)
        m.block<2, 2>(2 * n, 2 * n) = coin_2x2(angles[n]);
    return {std::move(m), lattice, std::nullopt};
}

WalkOperator build_coin(const CoinField& field, int which, const LatticeSpec& lattice)
{
    if (which != 1 && which != 2)
        throw std::invalid_argument("coin index must be 1 or 2");
    return build_coin(which == 1 ? field.theta1 : field.theta2, lattice);
}

WalkOperator build_shift(const LatticeSpec& lattice)
{
    Matrix m = Matrix::Zero(lattice.dimension(), lattice.dimension());
    for (int n = 0; n < lattice.num_sites(); ++n) {
        m(2 * lattice.wrap(n - 1), 2 * n) = 1.0;
        m(2 * lattice.wrap(n + 1) + 1, 2 * n + 1) = 1.0;
    }
    return {std::move(m), lattice, std::nullopt};
}

WalkOperator build_gainloss(double gamma, const LatticeSpec& lattice)
{
    Matrix m = Matrix::Zero(lattice.dimension(), lattice.dimension());
    for (int n = 0; n < lattice.num_sites(); ++n)
        m.block<2, 2>(2 * n, 2 * n) = gainloss_2x2(gamma);
    return {std::move(m), lattice, std::nullopt};
}

WalkOperator compose_walk(WalkKind kind, const CoinField& field, double gamma,
                          const LatticeSpec& lattice)
{
    field.check(lattice);
    const auto gains = GainLossPair::for_kind(kind, gamma);

    // Rightmost factor first: start from C(theta1) and left-apply the rest.
    Matrix u = build_coin(field.theta1, lattice).matrix;
    left_apply_gainloss(u, gains.gamma1);
    u = left_apply_shift(u, lattice);
    left_apply_blocks(u, coin_blocks(field.theta2));
    left_apply_gainloss(u, gains.gamma2);
    u = left_apply_shift(u, lattice);

    return {std::move(u), lattice, WalkProvenance{kind, field, gamma}};
}

WalkOperator compose_walk_reference(WalkKind kind, const CoinField& field, double gamma,
                                    const LatticeSpec& lattice)
{
    field.check(lattice);
    const auto gains = GainLossPair::for_kind(kind, gamma);
    const Matrix s = build_shift(lattice).matrix;
    Matrix u = s * build_gainloss(gains.gamma2, lattice).matrix * build_coin(field, 2, lattice).matrix
               * s * build_gainloss(gains.gamma1, lattice).matrix
               * build_coin(field, 1, lattice).matrix;
    return {std::move(u), lattice, WalkProvenance{kind, field, gamma}};
}

BlochMatrix bloch_matrix(const GainLossPair& gains, double theta1, double theta2, double k)
{
    const Matrix2 s = shift_2x2(k);
    Matrix2 m = s * gainloss_2x2(gains.gamma2) * coin_2x2(theta2) * s * gainloss_2x2(gains.gamma1)
                * coin_2x2(theta1);
    return {m, k};
}

BlochMatrix bloch_matrix(WalkKind kind, double theta1, double theta2, double gamma, double k)
{
    return bloch_matrix(GainLossPair::for_kind(kind, gamma), theta1, theta2, k);
}

BlochMatrix timeframe_transform(const BlochMatrix& b, double theta1)
{
    return {coin_2x2(theta1 / 2) * b.matrix * coin_2x2(-theta1 / 2), b.momentum};
}

Matrix frame_rotation(const CoinField& field, const LatticeSpec& lattice)
{
    field.check(lattice);
    std::vector<double> half(field.theta1.size());
    std::transform(field.theta1.begin(), field.theta1.end(), half.begin(),
                   [](double t) { return t / 2; });
    return build_coin(half, lattice).matrix;
}

WalkOperator symmetry_frame(const WalkOperator& u)
{
    if (!u.provenance)
        throw std::invalid_argument("symmetry frame needs the coin field the operator was built from");
    const Matrix w = frame_rotation(u.provenance->field, u.lattice);
    // W^{-1} = W^dagger for the unitary coin rotation.
    return {w * u.matrix * w.adjoint(), u.lattice, u.provenance};
}

SymmetryAction build_symmetry(SymmetryKind kind, const LatticeSpec& lattice)
{
    switch (kind) {
    case SymmetryKind::parity: return {pauli(1), PositionMap::reflect, false, lattice};
    case SymmetryKind::time_reversal: return {pauli(1), PositionMap::identity, true, lattice};
    case SymmetryKind::parity_time: return {pauli(0), PositionMap::reflect, true, lattice};
    }
    throw std::invalid_argument("unknown symmetry kind");
}

Vector apply_symmetry(const SymmetryAction& a, const Vector& x)
{
    check_dimension(a, x.size(), x.size());
    Vector y(x.size());
    for (int n = 0; n < a.lattice.num_sites(); ++n)
        y.segment<2>(2 * target_site(a, n)) = a.coin_part * x.segment<2>(2 * n);
    if (a.conjugate)
        y = y.conjugate().eval();
    return y;
}

Matrix apply_symmetry(const SymmetryAction& a, const Matrix& m)
{
    check_dimension(a, m.rows(), m.cols());
    // A M A^{-1} = Q conj?(M) Q^dagger, and M Q^dagger = (Q M^dagger)^dagger.
    const Matrix qm = left_apply_unitary(a, a.conjugate ? Matrix(m.conjugate()) : m);
    return left_apply_unitary(a, qm.adjoint()).adjoint();
}

Matrix symmetry_unitary(const SymmetryAction& a)
{
    return left_apply_unitary(a, Matrix::Identity(a.lattice.dimension(), a.lattice.dimension()));
}

CoinField symmetrize_reflection(const CoinField& field)
{
    const int n_sites = static_cast<int>(field.size());
    const LatticeSpec lattice(n_sites);
    CoinField out = field;
    for (int n = 0; n < n_sites; ++n) {
        const int source = std::min(n, lattice.reflect(n));
        out.theta1[n] = field.theta1[source];
        out.theta2[n] = field.theta2[source];
    }
    return out;
}

}  // namespace qwalk
