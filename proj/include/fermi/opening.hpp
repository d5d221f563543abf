// Time profiles f_n(t) that switch the spin-field coupling on and off

#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace fermi {

// One exponential component a * exp(i * rate * t) of an opening profile on its support.
struct ExpTerm {
    std::complex<double> weight;
    double rate{0.0};
};

class OpeningFunction {
public:
    enum class Kind { Constant, SinSqWindow, CosSqWindow, ExpRampThenWindow };

    // f(t) = 1 for all t.
    static OpeningFunction constant();
    // f(t) = sin^2(pi t / T) on [0, T], zero elsewhere.
    static OpeningFunction sin_sq_window(double window);
    // f(t) = cos^2(pi t / 2T) on [0, T], zero elsewhere.
    static OpeningFunction cos_sq_window(double window);
    // f(t) = exp(t / tau) for t < 0, inner(t) for t >= 0.
    static OpeningFunction exp_ramp(double ramp_time, const OpeningFunction& inner);

    double operator()(double t) const;

    Kind kind() const noexcept { return kind_; }
    std::string name() const;

    // Window length T; +inf for Constant. For a ramp this is the inner window.
    double window() const noexcept;
    double ramp_time() const noexcept { return ramp_time_; }

    // Profile that acts for t >= 0 (the ramp's inner function, otherwise *this).
    const OpeningFunction& post_ramp() const noexcept;

    // Right end of the support on t >= 0 (+inf for Constant).
    double support_end() const noexcept { return window(); }

    // Decomposition of the t >= 0 profile into exponentials, valid on [0, support_end()].
    std::vector<ExpTerm> exponential_terms() const;

    // Closed-form integral of the t >= 0 profile over [0, t].
    double integral(double t) const;

    // True when the profile is identically zero on t >= 0.
    bool vanishes() const noexcept { return post_ramp().kind_ != Kind::Constant && post_ramp().window_ <= 0.0; }

    // Largest |rate| among the exponential terms (extra phase the profile adds to integrands).
    double max_rate() const;

private:
    OpeningFunction(Kind kind, double window) : kind_(kind), window_(window) {}

    Kind kind_{Kind::Constant};
    double window_{0.0};
    double ramp_time_{0.0};
    std::shared_ptr<const OpeningFunction> inner_;
};

}  // namespace fermi
