// Two ions hit by strong impulsive pulses: swap amplitude beyond perturbation theory
//
// The motional ground state of two ions, reduced to one ion, is thermal with parameter beta fixed by the
// symplectic eigenvalue of its covariance matrix. Its Schmidt form is sum_n Z e^{-beta n} |n>|n>.

#pragma once

#include "fermi/opening.hpp"

#include <cstddef>
#include <vector>

namespace fermi {

struct ThermalGroundState {
    double lambda{0.5};          // symplectic eigenvalue, >= 1/2
    double beta{0.0};            // +inf for a product state
    double e_minus_beta{0.0};
    std::vector<double> schmidt; // Z e^{-beta n}, truncated once the tail mass drops below the tolerance
};

// lambda = (sqrt(w0/w1) + sqrt(w1/w0)) / 4, e^{-beta} = sqrt((lambda - 1/2)/(lambda + 1/2)).
ThermalGroundState symplectic_temperature(double omega0, double omega1, double tail_tolerance = 1e-12);

struct PulseSpec {
    double alpha_a{0.0};
    double alpha_b{0.0};
};

// alpha_n = -eps / sqrt(2 omega0) * int_0^T f_n(t) dt
PulseSpec pulse_from_profile(double epsilon, double omega0, const OpeningFunction& f_a, const OpeningFunction& f_b,
                             double duration);

struct SwapResult {
    double amplitude{0.0};
    double probability{0.0};
};

// Leading Schmidt pair only: A = -2 e^{-(a_A^2 + a_B^2)/2} a_A a_B e^{-beta}, P = A^2.
SwapResult swap_probability(const PulseSpec& pulse, const ThermalGroundState& thermal);

// All Schmidt pairs n, m < cutoff: A = -sum c_n c_m <n|sin(a_A X)|m> <n|sin(a_B X)|m>, X = a + a^dag.
// The weights are c_n = e^{-beta n}, the same (unnormalized) convention as the two-term formula, so that
// cutoff = 2 reproduces swap_probability. With normalize = true they carry the factor Z.
SwapResult swap_probability_full(const PulseSpec& pulse, const ThermalGroundState& thermal, std::size_t cutoff,
                                 bool normalize = false);

// <n| sin(alpha X) |m>; nonzero only for odd n - m.
double sine_matrix_element(std::size_t n, std::size_t m, double alpha);

// Equal pulses a_A = a_B = alpha: location of the maximum of P on [lo, hi] (grid scan, then Brent refinement).
double optimal_equal_pulse(const ThermalGroundState& thermal, double lo = 0.0, double hi = 3.0,
                           std::size_t grid = 301);

}  // namespace fermi
