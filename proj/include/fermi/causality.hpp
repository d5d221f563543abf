// Vacuum anticommutator/commutator of site displacements and the emergent light cone

#pragma once

#include "fermi/mode_core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fermi {

// F_a(tau) = <0|{q_A(t'), q_B(t'')}|0> = 2 Re sum_k lambda_Ak conj(lambda_Bk) e^{i omega_k tau}, tau = t'' - t'
double anticommutator(const ModeBasis& basis, std::size_t a, std::size_t b, double tau);

// F_c(tau) with i F_c = <0|[q_A(t'), q_B(t'')]|0>, i.e. 2 Im sum_k lambda_Ak conj(lambda_Bk) e^{i omega_k tau}
double commutator(const ModeBasis& basis, std::size_t a, std::size_t b, double tau);

struct CausalityTrace {
    std::vector<double> taus;
    std::vector<double> f_a;
    std::vector<double> f_c;
    std::size_t site_a{0};
    std::size_t site_b{0};
    BasisKind kind{BasisKind::Custom};
};

// Evaluates both functions on a strictly increasing tau grid.
CausalityTrace causality_trace(const ModeBasis& basis, std::size_t a, std::size_t b, std::span<const double> taus);

struct LightconeEstimate {
    double rise_time{0.0};      // tau* at the largest forward difference of F_c
    double nominal_time{0.0};   // x/c for chains, 1/omega_0 for traps
    double sharpness{0.0};      // that largest slope divided by max |F_c| on the window
    std::size_t samples{0};     // grid points actually used
};

// Distance along the ring in sites, min(|B-A|, N-|B-A|) for chains.
std::size_t chain_separation(const ModeBasis& basis, std::size_t a, std::size_t b);

// L R / (c N) for chains, 1/omega_0 (slowest mode) otherwise.
double nominal_causal_time(const ModeBasis& basis, std::size_t a, std::size_t b);

// Scans tau in [tau_min, tau_max]. n_samples >= 100 is required and is widened until every
// period of the fastest mode holds >= 20 samples. Throws NoRiseDetected when F_c is flat.
LightconeEstimate lightcone_estimate(const ModeBasis& basis, std::size_t a, std::size_t b, double tau_max,
                                     std::size_t n_samples = 2000, double tau_min = 0.0);

}  // namespace fermi
