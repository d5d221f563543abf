// Bare second-order transition amplitude |up_A down_B 0> -> |down_A up_B 0>
//
// A(t) = A_0(t) + A_c(t): A_0 carries the vacuum anticommutator with two independent time
// integrations, A_c the commutator with ordered integrations. Amplitudes include the epsilon^2 factor.

#pragma once

#include "fermi/mode_core.hpp"
#include "fermi/quadrature.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace fermi {

struct AmplitudeTrace {
    std::vector<double> times;
    std::vector<cplx> a0;           // empty for dressed traces
    std::vector<cplx> ac;           // empty for dressed traces
    std::vector<cplx> total;
    std::vector<double> probability;
    Eigen::MatrixXcd per_mode;      // times x modes, filled when requested
    std::vector<std::string> warnings;

    // max |A_c| / max |A_0| over the trace (0 when A_0 vanishes identically)
    double commutator_ratio() const;
};

struct AmplitudeOptions {
    QuadratureOptions quadrature{};
    bool keep_per_mode{false};
};

AmplitudeTrace bare_amplitude(const ModeBasis& basis, const Scenario& scenario, std::span<const double> times,
                              const AmplitudeOptions& options = {});

// Trace over [0, T] on n_points uniform samples, T = scenario.duration. Adds a warning
// (does not fail) when T reaches the nominal causal time of the pair.
AmplitudeTrace windowed_amplitude(const ModeBasis& basis, const Scenario& scenario, std::size_t n_points = 201,
                                  const AmplitudeOptions& options = {});

// Emission-absorption plus absorption-emission, evaluated directly as two ordered integrals.
cplx time_ordered_amplitude(const ModeBasis& basis, const Scenario& scenario, double t,
                            const QuadratureOptions& options = {});

std::vector<double> uniform_grid(double start, double stop, std::size_t count);

}  // namespace fermi
