// Exact evolution of the two-spin + field Hamiltonian in a truncated Fock space
//
// H(t) = sum_k w_k a_k^dag a_k + sum_n (Omega_n/2 sigma_z^n + eps f_n(t) sigma_x^n q_n), no rotating-wave
// truncation. States are kept in the interaction picture c = e^{i H_0 t} psi, so projections are directly
// comparable with the perturbative amplitudes.

#pragma once

#include "fermi/dressing.hpp"
#include "fermi/mode_core.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace fermi {

class FockSpace {
public:
    static constexpr double kMaxDimension = 2e6;

    // All occupation vectors with total <= cutoff, in lexicographic order, times the four spin patterns.
    FockSpace(std::size_t n_modes, unsigned cutoff);

    // 4 * C(n_modes + cutoff, cutoff) without enumerating.
    static double count_dimension(std::size_t n_modes, unsigned cutoff);

    std::size_t n_modes() const noexcept { return n_modes_; }
    unsigned cutoff() const noexcept { return cutoff_; }
    std::size_t n_occupations() const noexcept { return occupations_.size(); }
    std::size_t dimension() const noexcept { return 4 * occupations_.size(); }

    const std::vector<unsigned>& occupation(std::size_t occ_index) const { return occupations_.at(occ_index); }
    // basis index = spin pattern * n_occupations + occupation index
    std::size_t index(SpinPattern spins, std::span<const unsigned> occupation) const;
    std::size_t index(SpinPattern spins, const Phonons& phonons) const;
    bool contains(const Phonons& phonons) const;
    SpinPattern spins_of(std::size_t i) const { return static_cast<SpinPattern>(i / occupations_.size()); }
    const std::vector<unsigned>& occupation_of(std::size_t i) const { return occupations_[i % occupations_.size()]; }
    unsigned total_of(std::size_t i) const { return totals_[i % occupations_.size()]; }

private:
    std::size_t n_modes_;
    unsigned cutoff_;
    std::vector<std::vector<unsigned>> occupations_;
    std::vector<unsigned> totals_;
    std::map<std::vector<unsigned>, std::size_t> lookup_;
};

using SparseC = Eigen::SparseMatrix<cplx>;

struct OracleHamiltonian {
    FockSpace fock;
    std::vector<double> energies;   // diagonal of H_0 (field + spins)
    SparseC v_a;                    // sigma_x^A q_A
    SparseC v_b;                    // sigma_x^B q_B
    double epsilon{0.0};
    OpeningFunction f_a = OpeningFunction::constant();
    OpeningFunction f_b = OpeningFunction::constant();

    // Largest row sum of |V_A| + |V_B|.
    double coupling_scale() const;
    // max w_k + max |Omega_n| + eps * coupling_scale
    double frequency_scale() const;
    // Schrodinger-frame H(t), dense (tests and small systems only).
    Eigen::MatrixXcd dense(double t) const;
    // <psi| H(t) |psi> for a Schrodinger-frame state.
    double energy(double t, const Eigen::VectorXcd& psi) const;
};

// Uses the full opening functions of the scenario (ramps included) for f_a, f_b.
OracleHamiltonian build_hamiltonian(const ModeBasis& basis, const Scenario& scenario, unsigned cutoff);

struct EvolutionResult {
    std::vector<double> times;
    Eigen::VectorXcd state;                   // interaction picture at the final time
    Eigen::MatrixXcd projections;             // times x tracked indices, interaction picture
    double norm_drift{0.0};
    double energy_drift{0.0};                 // |<H>(end) - <H>(start)| in the Schrodinger frame
};

// Largest admissible step, 1 / (50 * frequency_scale).
double max_time_step(const OracleHamiltonian& h);

// Classic RK4 from t0 to t_final with steps of at most dt (dt <= 0 picks max_time_step / 4).
// Records the tracked components at about n_records evenly spaced steps (plus both end points).
EvolutionResult evolve(const OracleHamiltonian& h, const Eigen::VectorXcd& initial, double t0, double t_final,
                       double dt = 0.0, std::span<const std::size_t> tracked = {}, std::size_t n_records = 0);

// Largest |c_i| over configurations violating the sector rule: S_z = 0 with odd phonon number or
// S_z = +-1 with even phonon number (relative to a state that starts in the even S_z = 0 sector).
double sector_leakage(const FockSpace& fock, const Eigen::VectorXcd& state);

// <down_A up_B 0| U_I(t, 0) |up_A down_B 0>.
cplx exact_swap_amplitude(const ModeBasis& basis, const Scenario& scenario, double t, unsigned cutoff,
                          double dt = 0.0);

struct ConvergedAmplitude {
    cplx amplitude;
    unsigned cutoff{0};
    double last_change{0.0};
};

// Raises the cutoff from start_cutoff until two successive amplitudes differ by <= tolerance.
ConvergedAmplitude converged_swap_amplitude(const ModeBasis& basis, const Scenario& scenario, double t,
                                            double tolerance = 1e-14, unsigned start_cutoff = 2,
                                            unsigned max_cutoff = 8, double dt = 0.0);

struct ResidualPoint {
    double epsilon{0.0};
    cplx exact;
    cplx perturbative;
    double residual{0.0};
    unsigned cutoff{0};
};

struct ResidualSweep {
    std::vector<ResidualPoint> points;
    double slope{0.0};   // least-squares slope of log residual vs log epsilon (points with residual > 0)
};

// Exact vs bare second-order amplitude at time t for each epsilon (run concurrently).
ResidualSweep residual_sweep(const ModeBasis& basis, const Scenario& scenario, double t,
                             std::span<const double> epsilons, double tolerance = 1e-14, double dt = 0.0);

double fitted_log_slope(std::span<const double> x, std::span<const double> y);

struct AdiabaticReport {
    double tau{0.0};
    double overlap{0.0};     // |<G|psi(0)>| with G the normalized analytic dressed ground state
    double norm_drift{0.0};
};

// Evolves |down down 0> under f = e^{t/tau} on both sites from -10 tau to 0 (scenario openings are ignored).
AdiabaticReport adiabatic_dressing_check(const ModeBasis& basis, const Scenario& scenario, double tau,
                                         unsigned cutoff = 2, double dt = 0.0);

// Dense Fock-space vector of an expansion (terms outside the space are dropped).
Eigen::VectorXcd to_fock_vector(const FockSpace& fock, const StateExpansion& state);

}  // namespace fermi
