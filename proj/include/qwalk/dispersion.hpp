#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qwalk/walk_operators.hpp"

namespace qwalk {

/// Both quasi-energy bands at momentum k. eps_plus = arccos(rhs) on the
/// principal branch (Re in [0, pi]); eps_minus is its negation, wrapped so
/// that Re lies in (-pi, pi].
struct BandPoint {
    double k = 0.0;
    Complex eps_plus;
    Complex eps_minus;
    Complex cos_eps;  // right-hand side of the dispersion relation
};

struct BandScan {
    WalkKind kind = WalkKind::u1_pt;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double gamma = 0.0;
    std::vector<BandPoint> points;

    double max_abs_imag() const;
};

/// cos eps(k) for U1: cos t1 cos t2 cos 2k - sin t1 sin t2 cosh 2g.
Complex dispersion_rhs_u1(double theta1, double theta2, double gamma, double k);
/// cos eps(k) for U2: cos t1 cos t2 cosh 2g cos 2k - sin t1 sin t2 + i cos t1 cos t2 sinh 2g sin 2k.
Complex dispersion_rhs_u2(double theta1, double theta2, double gamma, double k);

BandPoint band_point(Complex cos_eps, double k);
BandPoint dispersion_u1(double theta1, double theta2, double gamma, double k);
BandPoint dispersion_u2(double theta1, double theta2, double gamma, double k);
BandPoint dispersion(WalkKind kind, double theta1, double theta2, double gamma, double k);

/// Uniform grid of num_k momenta in (-pi, pi], ascending.
std::vector<double> momentum_grid(int num_k);
/// k_m = 2 pi m / N mapped into (-pi, pi].
std::vector<double> lattice_momenta(int num_sites);

/// OpenMP-parallel over the k-grid.
BandScan band_scan(WalkKind kind, double theta1, double theta2, double gamma, int num_k);
/// Serial reference of band_scan.
BandScan band_scan_serial(WalkKind kind, double theta1, double theta2, double gamma, int num_k);

/// Smallest gamma >= 0 at which max_k |cos eps| reaches 1 for U1, by
/// bisection to `tol`. nullopt when sin t1 sin t2 = 0 (gamma drops out).
std::optional<double> critical_gain_u1(double theta1, double theta2, double tol = 1e-12);

struct BlochLatticeCheck {
    double max_mismatch = 0.0;
    bool passed = false;
};

/// Lattice spectrum of the homogeneous walk against e^{-i eps(k_m)} of both bands.
BlochLatticeCheck verify_bloch_vs_lattice(WalkKind kind, double theta1, double theta2, double gamma,
                                          int num_sites, double tol);

struct RelationResidual {
    std::string name;
    double max_residual = 0.0;
    int samples = 0;
};

struct ElementalReport {
    std::vector<RelationResidual> relations;
    // P sigma_1 G(g) sigma_1 = G(+g) away from g = 0; reported, not gated.
    double parity_gainloss_breaking = 0.0;
    double tolerance = 0.0;

    double max_residual() const;
    bool passed() const { return max_residual() < tolerance; }
};

/// Elemental coin-space symmetry relations for the coin, shift and gain/loss
/// factors under P = sigma_1, T = sigma_1 K and PT = sigma_0 K, sampled on an
/// 11-point grid per parameter (theta, k in [-pi, pi], gamma in [-1, 1]).
ElementalReport verify_elemental_relations(double tol = 1e-14, int grid_points = 11);

}  // namespace qwalk
