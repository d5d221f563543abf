#include "fermi/quadrature.hpp"

#include "fermi/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace fermi {

using cplx = std::complex<double>;

// ---------------------------------------------------------------- divided differences of exp

namespace {

// e^z - 1 without cancellation for small |z|
cplx expm1_complex(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

// e[x, y]
cplx exp_dd_pair(cplx x, cplx y) {
    return std::exp(x) * exp_divided_difference(y - x);
}

}  // namespace

cplx exp_divided_difference(cplx z) {
    if (std::abs(z) < 0.25) {
        // sum_n z^n / (n+1)!
        cplx term{1.0, 0.0};
        cplx sum = term;
        for (int n = 1; n < 20; ++n) {
            term *= z / static_cast<double>(n + 1);
            sum += term;
        }
        return sum;
    }
    return expm1_complex(z) / z;
}

cplx exp_divided_difference(cplx z1, cplx z2) {
    const std::array<cplx, 3> p{cplx{0.0, 0.0}, z1, z2};
    double spread = 0.0;
    int ia = 0;
    int ic = 1;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double d = std::abs(p[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(j)]);
            if (d > spread) {
                spread = d;
                ia = i;
                ic = j;
            }
        }
    }

    if (spread < 1.0) {
        // Taylor series about the centroid: e^m sum_n h_n(q) / (n+2)!
        const cplx m = (p[0] + p[1] + p[2]) / 3.0;
        const cplx q0 = p[0] - m;
        const cplx q1 = p[1] - m;
        const cplx q2 = p[2] - m;
        cplx a{1.0, 0.0};  // q0^n
        cplx b{1.0, 0.0};  // h_n(q0, q1)
        cplx c{1.0, 0.0};  // h_n(q0, q1, q2)
        double factorial = 2.0;
        cplx sum = c / factorial;
        for (int n = 1; n < 30; ++n) {
            a *= q0;
            b = a + q1 * b;
            c = b + q2 * c;
            factorial *= static_cast<double>(n + 2);
            sum += c / factorial;
        }
        return std::exp(m) * sum;
    }

    const int ib = 3 - ia - ic;
    const cplx a = p[static_cast<std::size_t>(ia)];
    const cplx b = p[static_cast<std::size_t>(ib)];
    const cplx c = p[static_cast<std::size_t>(ic)];
    return (exp_dd_pair(a, b) - exp_dd_pair(b, c)) / (a - c);
}

// ---------------------------------------------------------------- closed forms

namespace {

double effective_end(const OpeningFunction& f, double t) {
    return std::min(t, f.post_ramp().support_end());
}

cplx closed_single(const OpeningFunction& f, double phase, double t) {
    const double tc = effective_end(f, t);
    if (tc <= 0.0) return {0.0, 0.0};
    cplx sum{0.0, 0.0};
    for (const auto& term : f.exponential_terms()) {
        sum += term.weight * tc * exp_divided_difference(cplx(0.0, (phase + term.rate) * tc));
    }
    return sum;
}

cplx closed_nested(const OpeningFunction& outer, double outer_phase, const OpeningFunction& inner,
                   double inner_phase, double t) {
    const double t1 = effective_end(outer, t);
    if (t1 <= 0.0) return {0.0, 0.0};
    const double t2 = effective_end(inner, t1);
    if (t2 <= 0.0) return {0.0, 0.0};

    const auto outer_terms = outer.exponential_terms();
    const auto inner_terms = inner.exponential_terms();
    cplx sum{0.0, 0.0};
    for (const auto& o : outer_terms) {
        const cplx z1(0.0, (outer_phase + o.rate) * t2);
        for (const auto& i : inner_terms) {
            const cplx z2(0.0, (inner_phase + i.rate) * t2);
            sum += o.weight * i.weight * t2 * t2 * exp_divided_difference(z1, z1 + z2);
        }
    }
    if (t1 > t2) {
        // inner profile has closed; the inner integral is frozen at its value at t2
        sum += closed_single(inner, inner_phase, t2) *
               (closed_single(outer, outer_phase, t1) - closed_single(outer, outer_phase, t2));
    }
    return sum;
}

// ---------------------------------------------------------------- Gauss-Legendre

constexpr int kNodes = 20;

struct Rule {
    std::array<double, kNodes> x;
    std::array<double, kNodes> w;
};

const Rule& gauss_rule() {
    static const Rule rule = [] {
        using G = boost::math::quadrature::gauss<double, kNodes>;
        const auto& abscissa = G::abscissa();
        const auto& weights = G::weights();
        Rule r{};
        const int half = kNodes / 2;
        for (int i = 0; i < half; ++i) {
            r.x[static_cast<std::size_t>(half - 1 - i)] = -abscissa[static_cast<std::size_t>(i)];
            r.w[static_cast<std::size_t>(half - 1 - i)] = weights[static_cast<std::size_t>(i)];
            r.x[static_cast<std::size_t>(half + i)] = abscissa[static_cast<std::size_t>(i)];
            r.w[static_cast<std::size_t>(half + i)] = weights[static_cast<std::size_t>(i)];
        }
        return r;
    }();
    return rule;
}

cplx integrand(const OpeningFunction& f, double phase, double s) {
    return f(s) * cplx(std::cos(phase * s), std::sin(phase * s));
}

cplx gauss_segment(const OpeningFunction& f, double phase, double a, double b) {
    const Rule& rule = gauss_rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    cplx sum{0.0, 0.0};
    for (int i = 0; i < kNodes; ++i) {
        const auto u = static_cast<std::size_t>(i);
        sum += rule.w[u] * integrand(f, phase, mid + half * rule.x[u]);
    }
    return half * sum;
}

int initial_panels(double phase, double rate, double length) {
    const double cycles = (std::abs(phase) + rate) * length / (2.0 * std::numbers::pi);
    return std::max(1, static_cast<int>(std::ceil(cycles)));
}

cplx quad_single_fixed(const OpeningFunction& f, double phase, double tc, int panels) {
    cplx sum{0.0, 0.0};
    const double h = tc / panels;
    for (int p = 0; p < panels; ++p) sum += gauss_segment(f, phase, p * h, (p + 1) * h);
    return sum;
}

// segments [0, t2] and [t2, t1] are panelled separately so the inner profile's closing edge is a breakpoint
cplx quad_nested_fixed(const OpeningFunction& outer, double outer_phase, const OpeningFunction& inner,
                       double inner_phase, double t1, double t2, int panels) {
    const Rule& rule = gauss_rule();
    cplx total{0.0, 0.0};
    cplx inner_cum{0.0, 0.0};
    auto run_segment = [&](double from, double to, int count) {
        const double h = (to - from) / count;
        for (int p = 0; p < count; ++p) {
            const double a = from + p * h;
            const double b = a + h;
            const double half = 0.5 * h;
            const double mid = a + half;
            cplx panel{0.0, 0.0};
            for (int i = 0; i < kNodes; ++i) {
                const auto u = static_cast<std::size_t>(i);
                const double x = mid + half * rule.x[u];
                const cplx g_in = inner_cum + gauss_segment(inner, inner_phase, a, x);
                panel += rule.w[u] * integrand(outer, outer_phase, x) * g_in;
            }
            total += half * panel;
            inner_cum += gauss_segment(inner, inner_phase, a, b);
        }
    };
    run_segment(0.0, t2, panels);
    if (t1 > t2) run_segment(t2, t1, panels);
    return total;
}

template <class Eval>
cplx refine(Eval&& eval, int panels, const QuadratureOptions& options, double abs_floor, const char* what,
            double phase) {
    cplx previous = eval(panels);
    for (int d = 0; d < options.max_doublings; ++d) {
        panels *= 2;
        const cplx current = eval(panels);
        if (std::abs(current - previous) <= options.rel_tol * std::abs(current) + abs_floor) return current;
        previous = current;
    }
    std::ostringstream os;
    os << what << ": quadrature did not reach rel_tol " << options.rel_tol << " after " << options.max_doublings
       << " doublings (worst phase " << phase << ")";
    throw NumericalFailure(os.str());
}

}  // namespace

cplx window_integral(const OpeningFunction& f, double phase, double t, const QuadratureOptions& options) {
    if (!(t >= 0.0)) throw InvalidParameters("window integral: t must be >= 0");
    if (options.method != IntegrationMethod::Quadrature) return closed_single(f, phase, t);

    const OpeningFunction& g = f.post_ramp();
    const double tc = effective_end(g, t);
    if (tc <= 0.0) return {0.0, 0.0};
    const double floor = 1e-15 * tc;
    return refine([&](int panels) { return quad_single_fixed(g, phase, tc, panels); },
                  initial_panels(phase, g.max_rate(), tc), options, floor, "window integral", phase);
}

cplx nested_window_integral(const OpeningFunction& outer, double outer_phase, const OpeningFunction& inner,
                            double inner_phase, double t, const QuadratureOptions& options) {
    if (!(t >= 0.0)) throw InvalidParameters("nested window integral: t must be >= 0");
    if (options.method != IntegrationMethod::Quadrature) {
        return closed_nested(outer.post_ramp(), outer_phase, inner.post_ramp(), inner_phase, t);
    }

    const OpeningFunction& f1 = outer.post_ramp();
    const OpeningFunction& f2 = inner.post_ramp();
    const double t1 = effective_end(f1, t);
    if (t1 <= 0.0) return {0.0, 0.0};
    const double t2 = effective_end(f2, t1);
    if (t2 <= 0.0) return {0.0, 0.0};
    const double fastest = std::max(std::abs(outer_phase) + f1.max_rate(), std::abs(inner_phase) + f2.max_rate());
    const double floor = 1e-15 * t1 * t1;
    return refine(
        [&](int panels) { return quad_nested_fixed(f1, outer_phase, f2, inner_phase, t1, t2, panels); },
        initial_panels(fastest, 0.0, t1), options, floor, "nested window integral", fastest);
}

cplx double_window_integral(const OpeningFunction& f, double omega, double mode_frequency, double t,
                            Ordering ordering, const QuadratureOptions& options) {
    const double phi = omega + mode_frequency;
    if (ordering == Ordering::Independent) {
        return window_integral(f, -phi, t, options) * window_integral(f, phi, t, options);
    }
    return nested_window_integral(f, -phi, f, phi, t, options);
}

}  // namespace fermi
