#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double pi = 3.14159265358979323846;

// Internal (chirality) states. Basis index of (site n, state s) is 2n + s.
enum class Chirality : int { left = 0, right = 1 };

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedCaseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Periodic 1D lattice of N sites with a two-level coin space on each site.
class LatticeSpec {
public:
    explicit LatticeSpec(int num_sites) : num_sites_(num_sites)
    {
        if (num_sites < 1)
            throw DimensionError("lattice needs at least one site, got " + std::to_string(num_sites));
    }

    int num_sites() const { return num_sites_; }
    int dimension() const { return 2 * num_sites_; }

    static int index(int site, Chirality s) { return 2 * site + static_cast<int>(s); }

    // Site reached by n -> -n on the ring; site 0 is the fixed point.
    int reflect(int site) const { return (num_sites_ - site % num_sites_) % num_sites_; }
    int wrap(int site) const { return ((site % num_sites_) + num_sites_) % num_sites_; }

    bool operator==(const LatticeSpec&) const = default;

private:
    int num_sites_;
};

/// Per-site coin angles (radians) for the two coins of the two-step walk.
struct CoinField {
    std::vector<double> theta1;
    std::vector<double> theta2;

    static CoinField homogeneous(int num_sites, double theta1, double theta2)
    {
        return {std::vector<double>(num_sites, theta1), std::vector<double>(num_sites, theta2)};
    }

    std::size_t size() const { return theta1.size(); }
    bool is_homogeneous() const;
    void check(const LatticeSpec& lattice) const;

    bool operator==(const CoinField&) const = default;
};

enum class WalkKind { u1_pt, u2_trs };

std::string to_string(WalkKind kind);
WalkKind walk_kind_from_string(const std::string& name);

}  // namespace qwalk
