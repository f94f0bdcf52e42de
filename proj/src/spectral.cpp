#include "qwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qwalk {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double overlap_floor = 1e-12;

void fix_phase(Eigen::Ref<Vector> v)
{
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    const Complex c = v(largest);
    if (std::abs(c) > 0)
        v *= std::conj(c) / std::abs(c);
}

bool arg_then_modulus(Complex a, Complex b)
{
    const double pa = std::arg(a), pb = std::arg(b);
    if (pa != pb)
        return pa < pb;
    return std::abs(a) < std::abs(b);
}

// Clusters of indices whose eigenvalues chain together within `tol`.
std::vector<std::vector<int>> cluster(const std::vector<Complex>& values, double tol)
{
    const int n = static_cast<int>(values.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(values[i] - values[j]) <= tol)
                parent[find(i)] = find(j);

    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i)
        groups[find(i)].push_back(i);
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    std::sort(groups.begin(), groups.end());
    return groups;
}

double subspace_residual(const Spectrum& s, const SymmetryAction& a, const std::vector<int>& idx)
{
    Matrix span(s.eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c)
        span.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(idx[c]);

    Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-10 * sv(0))
        ++rank;
    const Matrix basis = svd.matrixU().leftCols(rank);

    Matrix image(basis.rows(), rank);
    for (Eigen::Index c = 0; c < rank; ++c)
        image.col(c) = apply_symmetry(a, Vector(basis.col(c)));
    const Matrix outside = image - basis * (basis.adjoint() * image);
    Eigen::JacobiSVD<Matrix> out_svd(outside);
    return out_svd.singularValues().size() > 0 ? out_svd.singularValues()(0) : 0.0;
}

}  // namespace

double EigenvectorSymmetryReport::max_residual() const
{
    if (!undefined_overlap.empty())
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double r : residuals)
        if (!std::isnan(r))
            worst = std::max(worst, r);
    for (const auto& g : degenerate_groups)
        worst = std::max(worst, g.subspace_residual);
    return worst;
}

Spectrum eigendecompose(const Matrix& u, double tol)
{
    const auto dim = static_cast<int>(u.rows());
    if (u.rows() != u.cols())
        throw DimensionError("eigendecompose needs a square matrix");
    if (dim == 0)
        throw DimensionError("eigendecompose needs a non-empty matrix");
    if (dim > max_solver_dimension)
        throw DimensionError("dimension " + std::to_string(dim) + " exceeds solver limit "
                             + std::to_string(max_solver_dimension));
    if (!u.allFinite())
        throw SolverError("operator has non-finite entries", dim, nan);

    Eigen::ComplexEigenSolver<Matrix> solver;
    solver.setMaxIterations(solver_iterations_per_row * std::max(dim, 1));
    solver.compute(u, true);
    if (solver.info() != Eigen::Success)
        throw SolverError("QR iteration did not converge within "
                              + std::to_string(solver_iterations_per_row * dim) + " iterations",
                          dim, nan);

    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    const auto& values = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return arg_then_modulus(values(a), values(b)); });

    Spectrum s;
    s.eigenvalues.reserve(dim);
    s.eigenvectors.resize(dim, dim);
    s.residuals.reserve(dim);
    const double scale = std::max(u.norm(), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (int j = 0; j < dim; ++j) {
        const Complex lambda = values(order[j]);
        Vector v = solver.eigenvectors().col(order[j]);
        v.normalize();
        fix_phase(v);
        const double r = (u * v - lambda * v).norm();
        worst = std::max(worst, r / scale);
        s.eigenvalues.push_back(lambda);
        s.eigenvectors.col(j) = v;
        s.residuals.push_back(r);
    }
    if (worst > tol)
        throw SolverError("eigenpair residual " + std::to_string(worst) + " exceeds tolerance "
                              + std::to_string(tol),
                          dim, worst);
    return s;
}

Spectrum eigendecompose(const WalkOperator& u, double tol)
{
    return eigendecompose(u.matrix, tol);
}

Spectrum to_symmetry_frame(const Spectrum& s, const CoinField& field, const LatticeSpec& lattice)
{
    const Matrix w = frame_rotation(field, lattice);
    Spectrum out = s;
    out.eigenvectors = w * s.eigenvectors;
    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
        out.eigenvectors.col(j).normalize();
        fix_phase(out.eigenvectors.col(j));
    }
    return out;
}

QuasiEnergy quasi_energy(Complex lambda)
{
    if (lambda == Complex{0.0, 0.0})
        throw SingularSpectrumError("zero eigenvalue has no quasi-energy");
    double re = -std::arg(lambda);
    if (re <= -pi)
        re = pi;
    return {{re, std::log(std::abs(lambda))}};
}

std::vector<QuasiEnergy> quasi_energies(const std::vector<Complex>& eigenvalues)
{
    std::vector<QuasiEnergy> out;
    out.reserve(eigenvalues.size());
    for (Complex l : eigenvalues)
        out.push_back(quasi_energy(l));
    return out;
}

std::vector<QuasiEnergy> quasi_energies(const Spectrum& s)
{
    return quasi_energies(s.eigenvalues);
}

RealityReport classify_reality(const std::vector<Complex>& eigenvalues, double tol)
{
    if (!(tol > 0))
        throw std::invalid_argument("unit-circle tolerance must be positive");
    RealityReport r;
    r.tolerance_used = tol;
    r.on_circle.reserve(eigenvalues.size());
    for (Complex l : eigenvalues) {
        const double dev = std::abs(std::abs(l) - 1.0);
        r.max_modulus_deviation = std::max(r.max_modulus_deviation, dev);
        const bool real = dev <= tol;
        r.on_circle.push_back(real);
        if (!real)
            ++r.num_complex;
    }
    r.complex_fraction = eigenvalues.empty()
                             ? 0.0
                             : static_cast<double>(r.num_complex) / static_cast<double>(eigenvalues.size());
    return r;
}

RealityReport classify_reality(const Spectrum& s, double tol)
{
    return classify_reality(s.eigenvalues, tol);
}

double check_antiunitary_relation(const Matrix& u, const SymmetryAction& a)
{
    const Matrix transformed = apply_symmetry(a, u);
    if (!a.conjugate)
        return (transformed - u).norm() / u.norm();

    Eigen::PartialPivLU<Matrix> lu(u);
    if (!(lu.rcond() > 1e-14))
        throw SingularityError("operator is numerically singular; U^{-1} is not available");
    return (transformed - lu.inverse()).norm() / u.norm();
}

double check_antiunitary_relation(const WalkOperator& u, const SymmetryAction& a, TimeFrame frame)
{
    if (frame == TimeFrame::as_built)
        return check_antiunitary_relation(u.matrix, a);
    return check_antiunitary_relation(symmetry_frame(u).matrix, a);
}

EigenvectorSymmetryReport check_eigenvector_symmetry(const Spectrum& s, const SymmetryAction& a,
                                                     double degeneracy_tol)
{
    const int n = static_cast<int>(s.size());
    EigenvectorSymmetryReport report;
    report.deltas.assign(n, nan);
    report.residuals.assign(n, nan);

    for (const auto& group : cluster(s.eigenvalues, degeneracy_tol)) {
        if (group.size() > 1) {
            report.degenerate_groups.push_back({group, subspace_residual(s, a, group)});
            continue;
        }
        const int j = group.front();
        const Vector v = s.vector(j);
        const Vector av = apply_symmetry(a, v);
        const Complex overlap = v.dot(av);
        if (std::abs(overlap) < overlap_floor) {
            report.undefined_overlap.push_back(j);
            continue;
        }
        const double delta = std::arg(overlap);
        report.deltas[j] = delta;
        report.residuals[j] = (av - std::polar(1.0, delta) * v).norm();
    }
    return report;
}

double multiset_mismatch(std::vector<Complex> computed, std::vector<Complex> expected)
{
    if (computed.size() != expected.size())
        throw DimensionError("multisets differ in size: " + std::to_string(computed.size()) + " vs "
                             + std::to_string(expected.size()));
    std::sort(computed.begin(), computed.end(), arg_then_modulus);
    std::sort(expected.begin(), expected.end(), arg_then_modulus);
    std::vector<bool> used(expected.size(), false);
    double worst = 0.0;
    for (Complex c : computed) {
        std::size_t best = expected.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < expected.size(); ++j) {
            if (used[j])
                continue;
            const double d = std::abs(c - expected[j]);
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_dist);
    }
    return worst;
}

double spectral_pairing_defect(const std::vector<Complex>& eigenvalues)
{
    std::vector<Complex> images;
    images.reserve(eigenvalues.size());
    for (Complex l : eigenvalues) {
        if (l == Complex{0.0, 0.0})
            throw SingularSpectrumError("zero eigenvalue has no 1/conj partner");
        images.push_back(1.0 / std::conj(l));
    }
    return multiset_mismatch(eigenvalues, std::move(images));
}

}  // namespace qwalk
