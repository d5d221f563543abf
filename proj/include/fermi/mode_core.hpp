// Normal-mode decomposition of the discrete field (periodic chain, linear ion trap)
//
// Every downstream module consumes a ModeBasis: frequencies omega_k and the
// site couplings lambda_{nk} in q_n = sum_k (lambda_{nk} a_k + conj(lambda_{nk}) a_k^dag).

#pragma once

#include "fermi/opening.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fermi {

using cplx = std::complex<double>;

enum class BasisKind { HarmonicChain, IonTrap, Custom };

const char* to_string(BasisKind kind) noexcept;

struct ChainParams {
    std::size_t n_sites{0};
    double length{1.0};    // L
    double pinning{1.0};   // nu, on-site frequency
    double speed{1.0};     // c

    // alpha = 1 - L^2 nu^2 / (2 N^2 c^2); must lie in (0, 1).
    double alpha() const noexcept;
    // E_0 = nu / sqrt(1 - alpha)
    double e0() const noexcept;
    void validate() const;
};

struct TrapParams {
    std::size_t n_ions{0};
    double base_frequency{1.0};  // omega_0, centre-of-mass mode

    void validate() const;
};

class ModeBasis {
public:
    // Validates positivity of frequencies and the canonical normalization
    // sum_k 2 omega_k |lambda_{nk}|^2 = 1 for every site.
    ModeBasis(BasisKind kind, std::vector<double> frequencies, Eigen::MatrixXcd couplings);

    BasisKind kind() const noexcept { return kind_; }
    std::size_t n_sites() const noexcept { return static_cast<std::size_t>(couplings_.rows()); }
    std::size_t n_modes() const noexcept { return frequencies_.size(); }

    double frequency(std::size_t k) const { return frequencies_.at(k); }
    std::span<const double> frequencies() const noexcept { return frequencies_; }
    double max_frequency() const noexcept;

    cplx coupling(std::size_t n, std::size_t k) const { return couplings_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)); }
    const Eigen::MatrixXcd& couplings() const noexcept { return couplings_; }

    // Largest deviation of sum_k 2 omega_k |lambda_{nk}|^2 from 1 over all sites.
    double normalization_defect() const;

    const std::optional<ChainParams>& chain() const noexcept { return chain_; }
    const std::optional<TrapParams>& trap() const noexcept { return trap_; }
    // Orthogonal eigenmode matrix D_{nk} (ion trap only).
    const std::optional<Eigen::MatrixXd>& eigenmodes() const noexcept { return eigenmodes_; }

    friend ModeBasis build_harmonic_chain(const ChainParams& params);
    friend ModeBasis build_ion_trap(const TrapParams& params);

private:
    BasisKind kind_;
    std::vector<double> frequencies_;
    Eigen::MatrixXcd couplings_;
    std::optional<ChainParams> chain_;
    std::optional<TrapParams> trap_;
    std::optional<Eigen::MatrixXd> eigenmodes_;
};

// Periodic chain: omega_k = E_0 sqrt(1 - alpha cos theta_k), lambda_{nk} = e^{i theta_k n} / sqrt(2 N omega_k).
// Modes k and N-k are stored separately; omega_{N-k} = omega_k and lambda_{n,N-k} = conj(lambda_{nk}) hold exactly.
ModeBasis build_harmonic_chain(const ChainParams& params);

// Linear Paul trap in the axial direction. lambda_{nk} = D_{nk} / sqrt(2 omega_k), frequencies ascending.
ModeBasis build_ion_trap(const TrapParams& params);

// Row n of the coupling matrix.
std::vector<cplx> site_coupling_row(const ModeBasis& basis, std::size_t n);

// ---------------------------------------------------------------------------
// Ion-trap internals, exposed for testing.

struct TrapEquilibrium {
    std::vector<double> positions;   // dimensionless, ascending
    Eigen::MatrixXd hessian;         // in units of omega_0^2
    double residual{0.0};            // max |force|
    int iterations{0};
};

// Force balance u_i - sum_{j<i} 1/(u_i-u_j)^2 + sum_{j>i} 1/(u_j-u_i)^2 = 0 by damped Newton.
TrapEquilibrium solve_trap_equilibrium(std::size_t n_ions, int max_iterations = 200);

struct SymmetricEigen {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXd vectors;   // columns, first nonzero component positive
    int sweeps{0};
};

// Cyclic Jacobi rotations until max off-diagonal |a_ij| <= threshold * max(1, ||A||).
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double threshold = 1e-14, int max_sweeps = 100);

// ---------------------------------------------------------------------------

struct Scenario {
    std::size_t site_a{0};
    std::size_t site_b{1};
    double omega_a{2.0};   // level splittings; trap scenarios store -delta here
    double omega_b{2.0};
    double epsilon{1.0};
    OpeningFunction opening_a = OpeningFunction::constant();
    OpeningFunction opening_b = OpeningFunction::constant();
    double duration{1.0};  // T

    void validate(std::size_t n_sites) const;
};

}  // namespace fermi
