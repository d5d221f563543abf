// Oscillatory window integrals shared by the amplitude, dressing and cloud modules
//
//   single:  S(f, phi, t)              = int_0^t f(s) e^{i phi s} ds
//   nested:  N(f1, phi1, f2, phi2, t)  = int_0^t dt' f1(t') e^{i phi1 t'} int_0^{t'} dt'' f2(t'') e^{i phi2 t''}
//
// Only the t >= 0 part of an opening function enters. Constant, sin^2 and cos^2 profiles have a
// closed form through divided differences of exp; composite Gauss-Legendre is the generic path.

#pragma once

#include "fermi/opening.hpp"

#include <complex>

namespace fermi {

enum class IntegrationMethod { Auto, ClosedForm, Quadrature };

struct QuadratureOptions {
    IntegrationMethod method{IntegrationMethod::Auto};
    double rel_tol{1e-10};
    int max_doublings{14};
};

// e[0, z] = (e^z - 1)/z
std::complex<double> exp_divided_difference(std::complex<double> z);
// e[0, z1, z2], second divided difference of exp over {0, z1, z2}
std::complex<double> exp_divided_difference(std::complex<double> z1, std::complex<double> z2);

std::complex<double> window_integral(const OpeningFunction& f, double phase, double t,
                                     const QuadratureOptions& options = {});

std::complex<double> nested_window_integral(const OpeningFunction& outer, double outer_phase,
                                            const OpeningFunction& inner, double inner_phase, double t,
                                            const QuadratureOptions& options = {});

enum class Ordering { Independent, Nested };

// Per-mode kernel with phi = omega + mode_frequency:
//   Independent: int_0^t f e^{-i phi t'} dt' * int_0^t f e^{i phi t''} dt''
//   Nested:      int_0^t dt' f e^{-i phi t'} int_0^{t'} dt'' f e^{i phi t''}
std::complex<double> double_window_integral(const OpeningFunction& f, double omega, double mode_frequency,
                                            double t, Ordering ordering, const QuadratureOptions& options = {});

}  // namespace fermi
