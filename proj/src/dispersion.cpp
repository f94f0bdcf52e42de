#include "qwalk/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qwalk/spectral.hpp"

namespace qwalk {

namespace {

double wrap_real_part(double re)
{
    return re <= -pi ? re + 2 * pi : re;
}

// A^{-1} psi for A = Q K^c: Q^dagger psi, conjugated when A is anti-unitary.
Vector inverse_action(const SymmetryAction& a, const Vector& psi)
{
    Vector x = a.coin_part.adjoint() * psi;
    if (a.conjugate)
        x = x.conjugate().eval();
    return x;
}

std::vector<double> linspace(double lo, double hi, int count)
{
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return v;
}

BandScan scan_header(WalkKind kind, double theta1, double theta2, double gamma, int num_k)
{
    if (num_k < 2)
        throw std::invalid_argument("band scan needs at least 2 momenta, got " + std::to_string(num_k));
    BandScan scan{kind, theta1, theta2, gamma, {}};
    scan.points.resize(num_k);
    return scan;
}

}  // namespace

double BandScan::max_abs_imag() const
{
    double worst = 0.0;
    for (const auto& p : points)
        worst = std::max({worst, std::abs(p.eps_plus.imag()), std::abs(p.eps_minus.imag())});
    return worst;
}

Complex dispersion_rhs_u1(double theta1, double theta2, double gamma, double k)
{
    return std::cos(theta1) * std::cos(theta2) * std::cos(2 * k)
           - std::sin(theta1) * std::sin(theta2) * std::cosh(2 * gamma);
}

Complex dispersion_rhs_u2(double theta1, double theta2, double gamma, double k)
{
    const double cc = std::cos(theta1) * std::cos(theta2);
    return {cc * std::cosh(2 * gamma) * std::cos(2 * k) - std::sin(theta1) * std::sin(theta2),
            cc * std::sinh(2 * gamma) * std::sin(2 * k)};
}

BandPoint band_point(Complex cos_eps, double k)
{
    Complex eps;
    if (cos_eps.imag() == 0.0 && std::abs(cos_eps.real()) <= 1.0)
        eps = std::acos(cos_eps.real());
    else
        eps = std::acos(cos_eps);
    const Complex minus{wrap_real_part(-eps.real()), -eps.imag() + 0.0};
    return {k, eps, minus, cos_eps};
}

BandPoint dispersion_u1(double theta1, double theta2, double gamma, double k)
{
    return band_point(dispersion_rhs_u1(theta1, theta2, gamma, k), k);
}

BandPoint dispersion_u2(double theta1, double theta2, double gamma, double k)
{
    return band_point(dispersion_rhs_u2(theta1, theta2, gamma, k), k);
}

BandPoint dispersion(WalkKind kind, double theta1, double theta2, double gamma, double k)
{
    return kind == WalkKind::u1_pt ? dispersion_u1(theta1, theta2, gamma, k)
                                   : dispersion_u2(theta1, theta2, gamma, k);
}

std::vector<double> momentum_grid(int num_k)
{
    std::vector<double> k(num_k);
    for (int j = 0; j < num_k; ++j)
        k[j] = -pi + 2 * pi * (j + 1) / num_k;
    return k;
}

std::vector<double> lattice_momenta(int num_sites)
{
    std::vector<double> k(num_sites);
    for (int m = 0; m < num_sites; ++m)
        k[m] = 2 * m > num_sites ? 2 * pi * (m - num_sites) / num_sites : 2 * pi * m / num_sites;
    return k;
}

BandScan band_scan(WalkKind kind, double theta1, double theta2, double gamma, int num_k)
{
    BandScan scan = scan_header(kind, theta1, theta2, gamma, num_k);
    const auto grid = momentum_grid(num_k);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < num_k; ++j)
        scan.points[j] = dispersion(kind, theta1, theta2, gamma, grid[j]);
    return scan;
}

BandScan band_scan_serial(WalkKind kind, double theta1, double theta2, double gamma, int num_k)
{
    BandScan scan = scan_header(kind, theta1, theta2, gamma, num_k);
    const auto grid = momentum_grid(num_k);
    for (int j = 0; j < num_k; ++j)
        scan.points[j] = dispersion(kind, theta1, theta2, gamma, grid[j]);
    return scan;
}

std::optional<double> critical_gain_u1(double theta1, double theta2, double tol)
{
    if (std::abs(std::sin(theta1) * std::sin(theta2)) < 1e-15)
        return std::nullopt;

    // |rhs| is extremal in k where cos 2k = +-1.
    auto excess = [&](double gamma) {
        return std::max(std::abs(dispersion_rhs_u1(theta1, theta2, gamma, 0.0)),
                        std::abs(dispersion_rhs_u1(theta1, theta2, gamma, pi / 2)))
               - 1.0;
    };
    if (excess(0.0) >= -4 * std::numeric_limits<double>::epsilon())
        return 0.0;

    double lo = 0.0, hi = 1.0;
    while (excess(hi) < 0)
        hi *= 2;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (excess(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BlochLatticeCheck verify_bloch_vs_lattice(WalkKind kind, double theta1, double theta2, double gamma,
                                          int num_sites, double tol)
{
    const LatticeSpec lattice(num_sites);
    const auto u = compose_walk(kind, CoinField::homogeneous(num_sites, theta1, theta2), gamma, lattice);
    const Spectrum s = eigendecompose(u);

    std::vector<Complex> expected;
    expected.reserve(2 * num_sites);
    for (double k : lattice_momenta(num_sites)) {
        const BandPoint p = dispersion(kind, theta1, theta2, gamma, k);
        expected.push_back(std::exp(Complex{0, -1} * p.eps_plus));
        expected.push_back(std::exp(Complex{0, -1} * p.eps_minus));
    }
    const double mismatch = multiset_mismatch(s.eigenvalues, std::move(expected));
    return {mismatch, mismatch < tol};
}

double ElementalReport::max_residual() const
{
    double worst = 0.0;
    for (const auto& r : relations)
        worst = std::max(worst, r.max_residual);
    return worst;
}

ElementalReport verify_elemental_relations(double tol, int grid_points)
{
    const LatticeSpec coin_space(1);
    const auto P = build_symmetry(SymmetryKind::parity, coin_space);
    const auto T = build_symmetry(SymmetryKind::time_reversal, coin_space);
    const auto PT = build_symmetry(SymmetryKind::parity_time, coin_space);

    const auto angles = linspace(-pi, pi, grid_points);
    const auto gains = linspace(-1.0, 1.0, grid_points);

    // Coin-space sample vectors for the "any vector" form of the relations.
    std::vector<Vector> spinors;
    for (double a : angles) {
        Vector psi(2);
        psi << std::cos(a / 2), std::polar(std::sin(a / 2), a);
        spinors.push_back(psi);
    }

    ElementalReport report;
    report.tolerance = tol;
    auto record = [&](std::size_t row, const std::string& name, double residual) {
        if (report.relations.size() <= row)
            report.relations.resize(row + 1);
        auto& r = report.relations[row];
        r.name = name;
        r.max_residual = std::max(r.max_residual, residual);
        ++r.samples;
    };
    auto conj_by = [](const SymmetryAction& a, const Matrix2& m) -> Matrix2 {
        return apply_symmetry(a, Matrix(m));
    };

    for (double theta : angles) {
        for (double k : angles) {
            for (double gamma : gains) {
                const Matrix2 c = coin_2x2(theta), s = shift_2x2(k), g = gainloss_2x2(gamma);
                std::size_t row = 0;
                record(row++, "P C(t) P^-1 = C(t)", (conj_by(P, c) - c).norm());
                record(row++, "P S(k) P^-1 = S(-k)", (conj_by(P, s) - shift_2x2(-k)).norm());
                record(row++, "P G(0) P^-1 = G(0)",
                       (conj_by(P, gainloss_2x2(0.0)) - gainloss_2x2(0.0)).norm());
                record(row++, "T C(t) T^-1 = C(-t)", (conj_by(T, c) - coin_2x2(-theta)).norm());
                record(row++, "T S(k) T^-1 = S(k)", (conj_by(T, s) - s).norm());
                // gamma_j = gamma_i (U2 configuration)
                record(row++, "T G(g_i) T^-1 = G(-g_j), g_j = g_i",
                       (conj_by(T, g) - gainloss_2x2(-gamma)).norm());
                record(row++, "PT C(t) PT^-1 = C(-t)", (conj_by(PT, c) - coin_2x2(-theta)).norm());
                record(row++, "PT S(k) PT^-1 = S(-k)", (conj_by(PT, s) - shift_2x2(-k)).norm());
                // gamma_j = -gamma_i (U1 configuration)
                record(row++, "PT G(g_i) PT^-1 = G(-g_j), g_j = -g_i",
                       (conj_by(PT, g) - gainloss_2x2(gamma)).norm());

                double c_vec = 0.0, s_vec = 0.0;
                for (const Vector& psi : spinors) {
                    c_vec = std::max(c_vec, (apply_symmetry(T, Vector(c * inverse_action(T, psi)))
                                             - coin_2x2(-theta) * psi).norm());
                    s_vec = std::max(s_vec, (apply_symmetry(T, Vector(s * inverse_action(T, psi)))
                                             - s * psi).norm());
                }
                record(row++, "T C(t) T^-1 psi = C(-t) psi", c_vec);
                record(row++, "T S(k) T^-1 psi = S(k) psi", s_vec);

                report.parity_gainloss_breaking
                    = std::max(report.parity_gainloss_breaking, (conj_by(P, g) - g).norm());
            }
        }
    }
    return report;
}

}  // namespace qwalk
