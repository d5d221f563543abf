#include "fermi/opening.hpp"

#include "fermi/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fermi {

OpeningFunction OpeningFunction::constant() {
    return OpeningFunction(Kind::Constant, std::numeric_limits<double>::infinity());
}

OpeningFunction OpeningFunction::sin_sq_window(double window) {
    if (!(window >= 0.0) || !std::isfinite(window)) {
        throw InvalidParameters("sin^2 window: T must be finite and >= 0");
    }
    return OpeningFunction(Kind::SinSqWindow, window);
}

OpeningFunction OpeningFunction::cos_sq_window(double window) {
    if (!(window >= 0.0) || !std::isfinite(window)) {
        throw InvalidParameters("cos^2 window: T must be finite and >= 0");
    }
    return OpeningFunction(Kind::CosSqWindow, window);
}

OpeningFunction OpeningFunction::exp_ramp(double ramp_time, const OpeningFunction& inner) {
    if (!(ramp_time > 0.0)) {
        throw InvalidParameters("exponential ramp: tau must be > 0");
    }
    if (inner.kind_ == Kind::ExpRampThenWindow) {
        throw InvalidParameters("exponential ramp: inner profile cannot itself be a ramp");
    }
    OpeningFunction f(Kind::ExpRampThenWindow, inner.window_);
    f.ramp_time_ = ramp_time;
    f.inner_ = std::make_shared<const OpeningFunction>(inner);
    return f;
}

double OpeningFunction::operator()(double t) const {
    using std::numbers::pi;
    switch (kind_) {
    case Kind::Constant:
        return 1.0;
    case Kind::SinSqWindow: {
        if (t < 0.0 || t > window_ || window_ <= 0.0) return 0.0;
        const double s = std::sin(pi * t / window_);
        return s * s;
    }
    case Kind::CosSqWindow: {
        // zero for t >= T as well: the closing edge of the window
        if (t < 0.0 || t >= window_) return 0.0;
        const double c = std::cos(pi * t / (2.0 * window_));
        return c * c;
    }
    case Kind::ExpRampThenWindow:
        if (t < 0.0) return std::exp(t / ramp_time_);
        return (*inner_)(t);
    }
    return 0.0;
}

std::string OpeningFunction::name() const {
    switch (kind_) {
    case Kind::Constant: return "constant";
    case Kind::SinSqWindow: return "sin2";
    case Kind::CosSqWindow: return "cos2";
    case Kind::ExpRampThenWindow: return "exp_ramp";
    }
    return "?";
}

double OpeningFunction::window() const noexcept {
    return window_;
}

const OpeningFunction& OpeningFunction::post_ramp() const noexcept {
    return kind_ == Kind::ExpRampThenWindow ? *inner_ : *this;
}

std::vector<ExpTerm> OpeningFunction::exponential_terms() const {
    using std::numbers::pi;
    const OpeningFunction& f = post_ramp();
    switch (f.kind_) {
    case Kind::Constant:
        return {{1.0, 0.0}};
    case Kind::SinSqWindow: {
        if (f.window_ <= 0.0) return {};
        // sin^2 x = 1/2 - e^{2ix}/4 - e^{-2ix}/4
        const double k = 2.0 * pi / f.window_;
        return {{0.5, 0.0}, {-0.25, k}, {-0.25, -k}};
    }
    case Kind::CosSqWindow: {
        if (f.window_ <= 0.0) return {};
        // cos^2 x = 1/2 + e^{2ix}/4 + e^{-2ix}/4, with x = pi t / 2T
        const double k = pi / f.window_;
        return {{0.5, 0.0}, {0.25, k}, {0.25, -k}};
    }
    case Kind::ExpRampThenWindow:
        break;
    }
    return {};
}

double OpeningFunction::integral(double t) const {
    using std::numbers::pi;
    const OpeningFunction& f = post_ramp();
    if (t <= 0.0) return 0.0;
    switch (f.kind_) {
    case Kind::Constant:
        return t;
    case Kind::SinSqWindow: {
        if (f.window_ <= 0.0) return 0.0;
        const double s = std::min(t, f.window_);
        return 0.5 * s - f.window_ / (4.0 * pi) * std::sin(2.0 * pi * s / f.window_);
    }
    case Kind::CosSqWindow: {
        if (f.window_ <= 0.0) return 0.0;
        const double s = std::min(t, f.window_);
        return 0.5 * s + f.window_ / (2.0 * pi) * std::sin(pi * s / f.window_);
    }
    case Kind::ExpRampThenWindow:
        break;
    }
    return 0.0;
}

double OpeningFunction::max_rate() const {
    double r = 0.0;
    for (const auto& term : exponential_terms()) r = std::max(r, std::abs(term.rate));
    return r;
}

}  // namespace fermi
