// Site-resolved distribution D_n(t) of field excitations around the two spins
//
// Leading order: D_n = eps^2 (|u_n|^2 + |v_n|^2) with u_n = sum_l lambda_nl c_Al e^{-i omega_l t} (spin-up
// cloud around A) and v_n the same with c_Bl (spin-down cloud around B). D_n is nonlocal: it is a
// qualitative diagnostic, not a measurable occupation.

#pragma once

#include "fermi/dressing.hpp"
#include "fermi/mode_core.hpp"
#include "fermi/quadrature.hpp"

#include <span>
#include <utility>
#include <vector>

namespace fermi {

struct CloudSnapshot {
    double time{0.0};
    std::vector<double> d;   // indexed by site
    DressingScheme scheme{DressingScheme::Bare};
};

struct CloudCoefficients {
    std::vector<cplx> c_a;
    std::vector<cplx> c_b;
};

// c_Ak = conj(l_Ak) (d1/(Omega_A + w_k) + i int_0^t f_A e^{-i(Omega_A - w_k)t'} dt')
// c_Bk = conj(l_Bk) ((d1 + d2)/(Omega_B + w_k) + i int_0^t f_B e^{i(Omega_B + w_k)t'} dt')
CloudCoefficients cloud_coefficients(const ModeBasis& basis, const Scenario& scenario, DressingScheme scheme,
                                     double t, const QuadratureOptions& options = {});

CloudSnapshot excitation_distribution(const ModeBasis& basis, const Scenario& scenario, DressingScheme scheme,
                                      double t, const QuadratureOptions& options = {});

// (up cloud from A, down cloud from B); their sum is excitation_distribution.
std::pair<CloudSnapshot, CloudSnapshot> single_site_distributions(const ModeBasis& basis, const Scenario& scenario,
                                                                  DressingScheme scheme, double t,
                                                                  const QuadratureOptions& options = {});

}  // namespace fermi
