#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/walk_operators.hpp"

namespace qwalk {

inline constexpr double default_solver_tol = 1e-10;
inline constexpr double default_circle_tol = 1e-8;
inline constexpr double default_degeneracy_tol = 1e-6;
// Largest operator dimension the dense solver is documented for.
inline constexpr int max_solver_dimension = 2048;

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int dimension, double worst_residual)
        : std::runtime_error(what), dimension_(dimension), worst_residual_(worst_residual)
    {
    }
    int dimension() const { return dimension_; }
    double worst_residual() const { return worst_residual_; }

private:
    int dimension_;
    double worst_residual_;
};

class SingularSpectrumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigenpairs of a general complex matrix. Eigenvectors are the columns of
/// `eigenvectors`, unit 2-norm, with their largest-modulus component real
/// positive. Ordered by eigenvalue argument, then modulus.
struct Spectrum {
    std::vector<Complex> eigenvalues;
    Matrix eigenvectors;
    std::vector<double> residuals;

    std::size_t size() const { return eigenvalues.size(); }
    Vector vector(std::size_t j) const { return eigenvectors.col(static_cast<Eigen::Index>(j)); }
};

struct QuasiEnergy {
    Complex epsilon;
};

struct RealityReport {
    std::vector<bool> on_circle;
    double max_modulus_deviation = 0.0;
    int num_complex = 0;
    double complex_fraction = 0.0;
    double tolerance_used = 0.0;
};

struct DegenerateGroup {
    std::vector<int> indices;
    // sin of the largest principal angle between span{v} and A span{v}.
    double subspace_residual = 0.0;
};

struct EigenvectorSymmetryReport {
    // Per eigenvector; NaN for members of a degenerate group or where the
    // overlap <v, A v> vanishes.
    std::vector<double> deltas;
    std::vector<double> residuals;
    std::vector<DegenerateGroup> degenerate_groups;
    std::vector<int> undefined_overlap;

    /// Largest per-vector or per-group residual.
    double max_residual() const;
};

enum class TimeFrame {
    symmetric,  // U' = C(theta1/2) U C(theta1/2)^{-1}, where the relations are stated
    as_built,   // U exactly as composed
};

/// Maximum iterations handed to the QR iteration, per unit of dimension.
inline constexpr int solver_iterations_per_row = 60;

Spectrum eigendecompose(const Matrix& u, double tol = default_solver_tol);
Spectrum eigendecompose(const WalkOperator& u, double tol = default_solver_tol);

/// The same spectrum expressed in the symmetry time frame: eigenvectors are
/// mapped by the frame rotation W of `field` and re-normalized.
Spectrum to_symmetry_frame(const Spectrum& s, const CoinField& field, const LatticeSpec& lattice);

/// epsilon = i log(lambda), principal branch, Re epsilon in (-pi, pi].
QuasiEnergy quasi_energy(Complex lambda);
std::vector<QuasiEnergy> quasi_energies(const Spectrum& s);
std::vector<QuasiEnergy> quasi_energies(const std::vector<Complex>& eigenvalues);

RealityReport classify_reality(const std::vector<Complex>& eigenvalues, double tol = default_circle_tol);
RealityReport classify_reality(const Spectrum& s, double tol = default_circle_tol);

/// ||A U A^{-1} - target||_F / ||U||_F, with target U^{-1} for anti-unitary A
/// and U for unitary A.
double check_antiunitary_relation(const Matrix& u, const SymmetryAction& a);
double check_antiunitary_relation(const WalkOperator& u, const SymmetryAction& a,
                                  TimeFrame frame = TimeFrame::symmetric);

EigenvectorSymmetryReport check_eigenvector_symmetry(const Spectrum& s, const SymmetryAction& a,
                                                     double degeneracy_tol = default_degeneracy_tol);

/// Largest distance between an eigenvalue and its nearest partner in the
/// image of the spectrum under lambda -> 1/conj(lambda).
double spectral_pairing_defect(const std::vector<Complex>& eigenvalues);

/// Greedy nearest-neighbour matching after sorting both multisets by
/// argument; returns the largest matched distance.
double multiset_mismatch(std::vector<Complex> computed, std::vector<Complex> expected);

}  // namespace qwalk
