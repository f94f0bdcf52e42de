#include "qwalk/disorder.hpp"

#include <cmath>
#include <random>

namespace qwalk {

namespace {

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::vector<double> box_samples(std::uint64_t seed, int count, double mean, double half_width)
{
    std::mt19937_64 gen(seed);
    std::vector<double> out(count);
    for (double& x : out)
        x = mean - half_width + 2 * half_width * unit_uniform(gen);
    return out;
}

void aggregate(EnsembleReport& report)
{
    double sum = 0.0;
    report.any_complex = false;
    for (const auto& r : report.per_realization) {
        report.any_complex = report.any_complex || r.reality.num_complex > 0;
        sum += r.reality.complex_fraction;
    }
    report.mean_complex_fraction
        = report.per_realization.empty() ? 0.0 : sum / static_cast<double>(report.per_realization.size());
}

EnsembleReport ensemble_skeleton(const DisorderSpec& spec, int num_realizations, const SpectralOptions& options)
{
    if (num_realizations < 1)
        throw std::invalid_argument("ensemble needs at least one realization");
    EnsembleReport report;
    report.spec = spec;
    report.num_realizations = num_realizations;
    report.options = options;
    return report;
}

using Outcome = std::pair<std::optional<RealizationResult>, RealizationFailure>;

Outcome guarded_realization(const DisorderSpec& spec, int index, RealizationRequest request,
                            const SpectralOptions& options)
{
    try {
        return {run_realization(spec, index, request, options), {}};
    } catch (const std::exception& e) {
        return {std::nullopt, {index, realization_seed(spec.master_seed, index), e.what()}};
    }
}

void collect(EnsembleReport& report, std::vector<Outcome>& outcomes)
{
    for (auto& [result, failure] : outcomes) {
        if (result)
            report.per_realization.push_back(std::move(*result));
        else
            report.failures.push_back(std::move(failure));
    }
    aggregate(report);
}

PhaseMapGrid phase_map_skeleton(DisorderCase c, const std::vector<double>& axis1,
                                const std::vector<double>& axis2, int num_realizations,
                                const DisorderSpec& defaults)
{
    if (c == DisorderCase::B)
        throw UnsupportedCaseError("phase maps are defined for cases A, C and D; case B has no real "
                                   "quasi-energy region to map");
    if (axis1.empty() || axis2.empty())
        throw std::invalid_argument("phase map axes must be non-empty");
    if (num_realizations < 1)
        throw std::invalid_argument("phase map needs at least one realization per cell");
    PhaseMapGrid grid;
    grid.disorder_case = c;
    grid.axis1 = axis1;
    grid.axis2 = axis2;
    grid.presence.assign(axis1.size(), std::vector<bool>(axis2.size(), false));
    grid.ratio.assign(axis1.size(), std::vector<double>(axis2.size(), 0.0));
    grid.num_realizations = num_realizations;
    grid.defaults = defaults;
    grid.defaults.disorder_case = c;
    return grid;
}

DisorderSpec cell_spec(const PhaseMapGrid& grid, std::size_t i, std::size_t j)
{
    DisorderSpec spec = grid.defaults;
    spec.mean_theta1 = grid.axis1[i];
    spec.theta2 = grid.axis2[j];
    spec.master_seed = mix_seed(grid.defaults.master_seed, i * grid.axis2.size() + j);
    return spec;
}

void fill_cell(PhaseMapGrid& grid, std::size_t i, std::size_t j, const EnsembleReport& cell)
{
    grid.presence[i][j] = cell.any_complex;
    grid.ratio[i][j] = cell.mean_complex_fraction;
}

}  // namespace

WalkKind walk_kind(DisorderCase c)
{
    return c == DisorderCase::A || c == DisorderCase::B ? WalkKind::u1_pt : WalkKind::u2_trs;
}

bool theta2_random(DisorderCase c)
{
    return c == DisorderCase::B || c == DisorderCase::D;
}

std::string to_string(DisorderCase c)
{
    switch (c) {
    case DisorderCase::A: return "A";
    case DisorderCase::B: return "B";
    case DisorderCase::C: return "C";
    case DisorderCase::D: return "D";
    }
    return "?";
}

DisorderCase disorder_case_from_string(const std::string& name)
{
    if (name == "a" || name == "A")
        return DisorderCase::A;
    if (name == "b" || name == "B")
        return DisorderCase::B;
    if (name == "c" || name == "C")
        return DisorderCase::C;
    if (name == "d" || name == "D")
        return DisorderCase::D;
    throw std::invalid_argument("unknown disorder case '" + name + "' (expected a, b, c or d)");
}

double DisorderSpec::gamma() const
{
    return std::log(gamma_exp);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t realization_seed(std::uint64_t master_seed, int index)
{
    return mix_seed(master_seed, static_cast<std::uint64_t>(index));
}

CoinField sample_coin_field(const DisorderSpec& spec, int realization_index)
{
    if (!(spec.half_width >= 0))
        throw std::invalid_argument("box half-width must be non-negative");
    const int n = spec.lattice.num_sites();
    const std::uint64_t seed = realization_seed(spec.master_seed, realization_index);
    CoinField field;
    field.theta1 = box_samples(mix_seed(seed, 1), n, spec.mean_theta1, spec.half_width);
    field.theta2 = theta2_random(spec.disorder_case)
                       ? box_samples(mix_seed(seed, 2), n, spec.theta2, spec.half_width)
                       : std::vector<double>(n, spec.theta2);
    return field;
}

RealizationResult run_realization(const DisorderSpec& spec, int index, RealizationRequest request,
                                  const SpectralOptions& options)
{
    const std::uint64_t seed = realization_seed(spec.master_seed, index);
    const CoinField field = sample_coin_field(spec, index);
    const auto u = compose_walk(walk_kind(spec.disorder_case), field, spec.gamma(), spec.lattice);

    Spectrum spectrum;
    try {
        spectrum = eigendecompose(u, options.solver_tol);
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " (realization " + std::to_string(index) + ", seed "
                              + std::to_string(seed) + ")",
                          e.dimension(), e.worst_residual());
    }

    RealizationResult result;
    result.realization_index = index;
    result.seed_used = seed;
    result.reality = classify_reality(spectrum, options.circle_tol);
    if (request.check_t_vectors && walk_kind(spec.disorder_case) == WalkKind::u2_trs) {
        const auto framed = to_symmetry_frame(spectrum, field, spec.lattice);
        result.eigenvector_symmetry = check_eigenvector_symmetry(
            framed, build_symmetry(SymmetryKind::time_reversal, spec.lattice), options.degeneracy_tol);
    }
    if (request.keep_eigenvalues)
        result.eigenvalues = spectrum.eigenvalues;
    return result;
}

EnsembleReport run_ensemble(const DisorderSpec& spec, int num_realizations, bool check_t_vectors,
                            const SpectralOptions& options)
{
    EnsembleReport report = ensemble_skeleton(spec, num_realizations, options);
    std::vector<Outcome> outcomes(num_realizations);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < num_realizations; ++r)
        outcomes[r] = guarded_realization(spec, r, {check_t_vectors, false}, options);
    collect(report, outcomes);
    return report;
}

EnsembleReport run_ensemble_serial(const DisorderSpec& spec, int num_realizations, bool check_t_vectors,
                                   const SpectralOptions& options)
{
    EnsembleReport report = ensemble_skeleton(spec, num_realizations, options);
    std::vector<Outcome> outcomes(num_realizations);
    for (int r = 0; r < num_realizations; ++r)
        outcomes[r] = guarded_realization(spec, r, {check_t_vectors, false}, options);
    collect(report, outcomes);
    return report;
}

PhaseMapGrid phase_map(DisorderCase c, const std::vector<double>& axis1, const std::vector<double>& axis2,
                       int num_realizations, const DisorderSpec& defaults, const SpectralOptions& options)
{
    PhaseMapGrid grid = phase_map_skeleton(c, axis1, axis2, num_realizations, defaults);
    const auto cols = axis2.size();
    const auto cells = static_cast<long>(axis1.size() * cols);
    // presence is a vector<bool>; cells are written back serially.
    std::vector<std::pair<bool, double>> results(cells);
#pragma omp parallel for schedule(dynamic)
    for (long cell = 0; cell < cells; ++cell) {
        const auto i = static_cast<std::size_t>(cell) / cols, j = static_cast<std::size_t>(cell) % cols;
        const auto report = run_ensemble_serial(cell_spec(grid, i, j), num_realizations, false, options);
        results[cell] = {report.any_complex, report.mean_complex_fraction};
    }
    for (long cell = 0; cell < cells; ++cell) {
        const auto i = static_cast<std::size_t>(cell) / cols, j = static_cast<std::size_t>(cell) % cols;
        grid.presence[i][j] = results[cell].first;
        grid.ratio[i][j] = results[cell].second;
    }
    return grid;
}

PhaseMapGrid phase_map_serial(DisorderCase c, const std::vector<double>& axis1,
                              const std::vector<double>& axis2, int num_realizations,
                              const DisorderSpec& defaults, const SpectralOptions& options)
{
    PhaseMapGrid grid = phase_map_skeleton(c, axis1, axis2, num_realizations, defaults);
    for (std::size_t i = 0; i < axis1.size(); ++i)
        for (std::size_t j = 0; j < axis2.size(); ++j)
            fill_cell(grid, i, j, run_ensemble_serial(cell_spec(grid, i, j), num_realizations, false, options));
    return grid;
}

}  // namespace qwalk
