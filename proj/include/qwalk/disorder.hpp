#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/spectral.hpp"

namespace qwalk {

/// The four disorder configurations:
///   A: U1, theta1 random, theta2 constant    B: U1, both random
///   C: U2, theta1 random, theta2 constant    D: U2, both random
enum class DisorderCase { A, B, C, D };

WalkKind walk_kind(DisorderCase c);
bool theta2_random(DisorderCase c);
std::string to_string(DisorderCase c);
DisorderCase disorder_case_from_string(const std::string& name);

struct DisorderSpec {
    DisorderCase disorder_case = DisorderCase::A;
    double mean_theta1 = 0.0;
    double theta2 = 0.0;  // mean of theta2 if random, else the constant
    double half_width = pi / 4;
    double gamma_exp = 1.1;  // e^gamma
    LatticeSpec lattice{120};
    std::uint64_t master_seed = 0;

    double gamma() const;
};

struct SpectralOptions {
    double circle_tol = default_circle_tol;
    double solver_tol = default_solver_tol;
    double degeneracy_tol = default_degeneracy_tol;
};

struct RealizationResult {
    int realization_index = 0;
    std::uint64_t seed_used = 0;
    RealityReport reality;
    std::optional<EigenvectorSymmetryReport> eigenvector_symmetry;
    std::vector<Complex> eigenvalues;  // filled only when requested
};

struct RealizationFailure {
    int realization_index = 0;
    std::uint64_t seed_used = 0;
    std::string message;
};

struct EnsembleReport {
    DisorderSpec spec;
    int num_realizations = 0;
    std::vector<RealizationResult> per_realization;
    std::vector<RealizationFailure> failures;
    bool any_complex = false;
    double mean_complex_fraction = 0.0;
    SpectralOptions options;
};

struct PhaseMapGrid {
    DisorderCase disorder_case = DisorderCase::A;
    std::vector<double> axis1;  // mean theta1
    std::vector<double> axis2;  // theta2 or mean theta2
    // Row-major [i][j] over (axis1[i], axis2[j]).
    std::vector<std::vector<bool>> presence;
    std::vector<std::vector<double>> ratio;
    int num_realizations = 0;
    DisorderSpec defaults;
};

/// splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
/// Seed of realization `index` of a master seed.
std::uint64_t realization_seed(std::uint64_t master_seed, int index);

CoinField sample_coin_field(const DisorderSpec& spec, int realization_index);

struct RealizationRequest {
    bool check_t_vectors = false;
    bool keep_eigenvalues = false;
};

/// Throws SolverError (message carries the realization seed) on solver failure.
RealizationResult run_realization(const DisorderSpec& spec, int index, RealizationRequest request = {},
                                  const SpectralOptions& options = {});

/// Realizations 0..R-1 in parallel (OpenMP); identical output to run_ensemble_serial.
EnsembleReport run_ensemble(const DisorderSpec& spec, int num_realizations, bool check_t_vectors = false,
                            const SpectralOptions& options = {});
EnsembleReport run_ensemble_serial(const DisorderSpec& spec, int num_realizations,
                                   bool check_t_vectors = false, const SpectralOptions& options = {});

/// Cell (i, j) runs an ensemble at (axis1[i], axis2[j]) with master seed
/// mix_seed(defaults.master_seed, i * axis2.size() + j). Cases A, C, D only.
PhaseMapGrid phase_map(DisorderCase c, const std::vector<double>& axis1, const std::vector<double>& axis2,
                       int num_realizations, const DisorderSpec& defaults, const SpectralOptions& options = {});
PhaseMapGrid phase_map_serial(DisorderCase c, const std::vector<double>& axis1,
                              const std::vector<double>& axis2, int num_realizations,
                              const DisorderSpec& defaults, const SpectralOptions& options = {});

}  // namespace qwalk
