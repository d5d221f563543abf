#include "fermi/dressing.hpp"

#include "fermi/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fermi {

const char* to_string(SpinPattern s) noexcept {
    switch (s) {
    case SpinPattern::DownDown: return "down_down";
    case SpinPattern::UpDown: return "up_down";
    case SpinPattern::DownUp: return "down_up";
    case SpinPattern::UpUp: return "up_up";
    }
    return "?";
}

bool spin_a_up(SpinPattern s) noexcept { return s == SpinPattern::UpDown || s == SpinPattern::UpUp; }
bool spin_b_up(SpinPattern s) noexcept { return s == SpinPattern::DownUp || s == SpinPattern::UpUp; }

SpinPattern make_spins(bool a_up, bool b_up) noexcept {
    if (a_up) return b_up ? SpinPattern::UpUp : SpinPattern::UpDown;
    return b_up ? SpinPattern::DownUp : SpinPattern::DownDown;
}

Phonons Phonons::pair(std::size_t k, std::size_t l) {
    if (k == l) throw InvalidParameters("phonon pair: modes must differ");
    if (k > l) std::swap(k, l);
    return {{{k, 1u}, {l, 1u}}};
}

unsigned Phonons::total() const noexcept {
    unsigned n = 0;
    for (const auto& [mode, count] : modes) n += count;
    return n;
}

cplx StateExpansion::coefficient(int order, SpinPattern spins, const Phonons& phonons) const {
    cplx sum{0.0, 0.0};
    for (const auto& term : terms) {
        if (term.order == order && term.spins == spins && term.phonons == phonons) sum += term.coeff;
    }
    return sum;
}

bool StateExpansion::parity_consistent() const {
    for (const auto& term : terms) {
        if ((term.order % 2) != static_cast<int>(term.phonons.total() % 2)) return false;
    }
    return true;
}

cplx StateExpansion::amplitude(SpinPattern spins, const Phonons& phonons) const {
    cplx sum{0.0, 0.0};
    for (const auto& term : terms) {
        if (term.spins == spins && term.phonons == phonons) sum += std::pow(epsilon, term.order) * term.coeff;
    }
    return sum;
}

DressingFactors factors(DressingScheme scheme) noexcept {
    switch (scheme) {
    case DressingScheme::SigmaX: return {1.0, 0.0};
    case DressingScheme::SigmaPlus: return {0.0, 1.0};
    case DressingScheme::Bare: return {0.0, 0.0};
    }
    return {};
}

const char* to_string(DressingScheme scheme) noexcept {
    switch (scheme) {
    case DressingScheme::SigmaX: return "sigma_x";
    case DressingScheme::SigmaPlus: return "sigma_plus";
    case DressingScheme::Bare: return "bare";
    }
    return "?";
}

namespace {

double common_splitting(const ModeBasis& basis, const Scenario& scenario) {
    const double omega = scenario.omega_a;
    if (std::abs(scenario.omega_a - scenario.omega_b) > 1e-12 * std::max(1.0, std::abs(omega))) {
        std::ostringstream os;
        os << "dressing: requires Omega_A == Omega_B (got " << scenario.omega_a << " and " << scenario.omega_b << ")";
        throw UnsupportedConfiguration(os.str());
    }
    if (!(omega > 0.0)) throw UnsupportedConfiguration("dressing: requires Omega > 0");
    for (double w : basis.frequencies()) {
        if (!(omega + w > 0.0)) throw UnsupportedConfiguration("dressing: Omega + omega_k must be positive");
    }
    return omega;
}

}  // namespace

StateExpansion dressed_ground_state(const ModeBasis& basis, const Scenario& scenario) {
    scenario.validate(basis.n_sites());
    const double omega = common_splitting(basis, scenario);
    const std::size_t a = scenario.site_a;
    const std::size_t b = scenario.site_b;
    const std::size_t modes = basis.n_modes();
    const double sqrt2 = std::numbers::sqrt2;

    StateExpansion g;
    g.epsilon = scenario.epsilon;
    g.terms.push_back({0, SpinPattern::DownDown, Phonons::vacuum(), {1.0, 0.0}});

    // first order: a single emitted phonon, spin of the emitter flipped up
    for (std::size_t k = 0; k < modes; ++k) {
        const double den = omega + basis.frequency(k);
        g.terms.push_back({1, SpinPattern::UpDown, Phonons::one(k), -std::conj(basis.coupling(a, k)) / den});
        g.terms.push_back({1, SpinPattern::DownUp, Phonons::one(k), -std::conj(basis.coupling(b, k)) / den});
    }

    // second order, separate dressing of A and of B
    for (std::size_t k = 0; k < modes; ++k) {
        const double wk = basis.frequency(k);
        const cplx ak = std::conj(basis.coupling(a, k));
        const cplx bk = std::conj(basis.coupling(b, k));
        g.terms.push_back({2, SpinPattern::DownDown, Phonons::two(k), (ak * ak + bk * bk) / (sqrt2 * (omega + wk) * wk)});
        for (std::size_t l = k + 1; l < modes; ++l) {
            const double wl = basis.frequency(l);
            const cplx al = std::conj(basis.coupling(a, l));
            const cplx bl = std::conj(basis.coupling(b, l));
            const double weight = (1.0 / (omega + wk) + 1.0 / (omega + wl)) / (wk + wl);
            g.terms.push_back({2, SpinPattern::DownDown, Phonons::pair(k, l), (ak * al + bk * bl) * weight});
        }
    }

    // second order, mutual dressing: both spins up
    cplx mutual{0.0, 0.0};
    for (std::size_t k = 0; k < modes; ++k) {
        const double wk = basis.frequency(k);
        const cplx la = basis.coupling(a, k);
        const cplx lb = basis.coupling(b, k);
        mutual += (std::conj(la) * lb + std::conj(lb) * la) / (2.0 * omega * (omega + wk));
    }
    g.terms.push_back({2, SpinPattern::UpUp, Phonons::vacuum(), mutual});
    for (std::size_t k = 0; k < modes; ++k) {
        const double wk = basis.frequency(k);
        const cplx ak = std::conj(basis.coupling(a, k));
        const cplx bk = std::conj(basis.coupling(b, k));
        g.terms.push_back({2, SpinPattern::UpUp, Phonons::two(k), sqrt2 * ak * bk / ((omega + wk) * (omega + wk))});
        for (std::size_t l = k + 1; l < modes; ++l) {
            const double wl = basis.frequency(l);
            const cplx al = std::conj(basis.coupling(a, l));
            const cplx bl = std::conj(basis.coupling(b, l));
            const double weight = (1.0 / (omega + wk) + 1.0 / (omega + wl)) / (2.0 * omega + wk + wl);
            g.terms.push_back({2, SpinPattern::UpUp, Phonons::pair(k, l), (ak * bl + al * bk) * weight});
        }
    }
    return g;
}

StateExpansion initial_dressed_state(const StateExpansion& ground, DressingScheme scheme, bool include_normalization) {
    StateExpansion out;
    out.epsilon = ground.epsilon;
    if (scheme == DressingScheme::Bare) {
        out.terms.push_back({0, SpinPattern::UpDown, Phonons::vacuum(), {1.0, 0.0}});
        return out;
    }
    for (const auto& term : ground.terms) {
        const bool a_up = spin_a_up(term.spins);
        const bool b_up = spin_b_up(term.spins);
        if (scheme == DressingScheme::SigmaPlus && a_up) continue;  // sigma_+ annihilates A-up components
        ExpansionTerm flipped = term;
        flipped.spins = make_spins(!a_up, b_up);
        out.terms.push_back(std::move(flipped));
    }
    if (include_normalization) {
        double norm1 = 0.0;
        for (const auto& term : out.terms) {
            if (term.order == 1) norm1 += std::norm(term.coeff);
        }
        out.terms.push_back({2, SpinPattern::UpDown, Phonons::vacuum(), {-0.5 * norm1, 0.0}});
    }
    return out;
}

AmplitudeTrace dressed_amplitude(const ModeBasis& basis, const Scenario& scenario, DressingScheme scheme,
                                 std::span<const double> times, const AmplitudeOptions& options) {
    scenario.validate(basis.n_sites());
    const double omega = common_splitting(basis, scenario);
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameters("dressed amplitude: sample times must be finite and >= 0");
    }
    const auto [d1, d2] = factors(scheme);
    const auto& fa = scenario.opening_a;
    const auto& fb = scenario.opening_b;
    const auto& q = options.quadrature;
    const double eps2 = scenario.epsilon * scenario.epsilon;
    const std::size_t modes = basis.n_modes();
    const cplx i_unit{0.0, 1.0};

    AmplitudeTrace trace;
    trace.times.assign(times.begin(), times.end());
    trace.total.resize(times.size());
    trace.probability.resize(times.size());
    if (options.keep_per_mode) trace.per_mode = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(times.size()),
                                                                       static_cast<Eigen::Index>(modes));

    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        cplx sum{0.0, 0.0};
        for (std::size_t k = 0; k < modes; ++k) {
            const double w = basis.frequency(k);
            const double plus = omega + w;
            const double minus = omega - w;
            const double constant = d1 / (2.0 * omega * plus);

            cplx f1 = -nested_window_integral(fa, -plus, fb, plus, t, q) + constant;
            if (d1 + d2 != 0.0) f1 += i_unit * (d1 + d2) / plus * window_integral(fa, -plus, t, q);

            cplx f2 = -nested_window_integral(fb, minus, fa, -minus, t, q) + constant;
            if (d1 != 0.0) f2 += i_unit * d1 / plus * window_integral(fb, minus, t, q);

            const cplx la = basis.coupling(scenario.site_a, k);
            const cplx lb = basis.coupling(scenario.site_b, k);
            const cplx mode = eps2 * (std::conj(lb) * la * f1 + std::conj(la) * lb * f2);
            sum += mode;
            if (options.keep_per_mode) trace.per_mode(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = mode;
        }
        trace.total[i] = sum;
        trace.probability[i] = std::norm(sum);
    }
    return trace;
}

namespace {

double static_sum(const ModeBasis& basis, double omega, std::size_t separation) {
    const auto& chain = basis.chain();
    const std::size_t n = chain->n_sites;
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = basis.frequency(k);
        const std::size_t m = (k * (separation % n)) % n;
        double c;
        if (m == 0) c = 1.0;
        else if (2 * m == n) c = -1.0;
        else c = std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / nd);
        sum += c / (2.0 * nd * omega * w * (omega + w));
    }
    return sum;
}

}  // namespace

double static_dressing_amplitude(const ModeBasis& basis, double omega, std::size_t separation) {
    if (basis.kind() != BasisKind::HarmonicChain || !basis.chain()) {
        throw UnsupportedConfiguration("static dressing amplitude: requires a harmonic-chain basis");
    }
    if (!(omega > 0.0)) throw InvalidParameters("static dressing amplitude: Omega must be > 0");
    return static_sum(basis, omega, separation);
}

std::vector<double> g_min(std::span<const std::size_t> even_sizes, double omega, double length, double pinning,
                          double speed) {
    std::vector<double> out;
    out.reserve(even_sizes.size());
    for (std::size_t n : even_sizes) {
        if (n == 0 || n % 2 != 0) {
            throw InvalidParameters("G_min: chain size must be even and positive (got " + std::to_string(n) + ")");
        }
        const ModeBasis chain = build_harmonic_chain({n, length, pinning, speed});
        out.push_back(static_dressing_amplitude(chain, omega, n / 2));
    }
    return out;
}

}  // namespace fermi
