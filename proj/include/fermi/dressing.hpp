// Perturbatively dressed ground/initial states, selection schemes and dressed amplitudes

#pragma once

#include "fermi/amplitude.hpp"
#include "fermi/mode_core.hpp"

#include <compare>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fermi {

// Spin configuration of (A, B)
enum class SpinPattern { DownDown, UpDown, DownUp, UpUp };

const char* to_string(SpinPattern s) noexcept;
bool spin_a_up(SpinPattern s) noexcept;
bool spin_b_up(SpinPattern s) noexcept;
SpinPattern make_spins(bool a_up, bool b_up) noexcept;

// Sparse phonon occupation: (mode, count) pairs sorted by mode, counts > 0.
struct Phonons {
    std::vector<std::pair<std::size_t, unsigned>> modes;

    static Phonons vacuum() { return {}; }
    static Phonons one(std::size_t k) { return {{{k, 1u}}}; }
    static Phonons two(std::size_t k) { return {{{k, 2u}}}; }
    // one phonon in k and one in l, k != l
    static Phonons pair(std::size_t k, std::size_t l);

    unsigned total() const noexcept;
    auto operator<=>(const Phonons&) const = default;
};

struct ExpansionTerm {
    int order{0};          // power of epsilon
    SpinPattern spins{SpinPattern::DownDown};
    Phonons phonons;
    cplx coeff;            // coefficient of epsilon^order
};

struct StateExpansion {
    double epsilon{0.0};
    std::vector<ExpansionTerm> terms;

    // Sum of coefficients of matching terms (0 if absent).
    cplx coefficient(int order, SpinPattern spins, const Phonons& phonons) const;
    // Odd orders carry odd phonon numbers, even orders even.
    bool parity_consistent() const;
    // Full amplitude sum_order epsilon^order coeff of one configuration.
    cplx amplitude(SpinPattern spins, const Phonons& phonons) const;
};

enum class DressingScheme { SigmaX, SigmaPlus, Bare };

struct DressingFactors {
    double d1{0.0};
    double d2{0.0};
};

DressingFactors factors(DressingScheme scheme) noexcept;
const char* to_string(DressingScheme scheme) noexcept;

// Ground state of H with f = 1 through epsilon^2, from time-independent perturbation theory
// (intermediate normalization). Requires omega_a == omega_b.
StateExpansion dressed_ground_state(const ModeBasis& basis, const Scenario& scenario);

// Applies the selection scheme to a dressed ground state. The normalization counter-term
// -1/2 ||psi^(1)||^2 |up down 0> is added only when requested.
StateExpansion initial_dressed_state(const StateExpansion& ground, DressingScheme scheme,
                                     bool include_normalization = false);

// A(t) = eps^2 sum_k (conj(l_Bk) l_Ak F_1k(t) + conj(l_Ak) l_Bk F_2k(t)) with the post-ramp profiles.
// The returned trace fills total/probability; a0/ac stay empty.
AmplitudeTrace dressed_amplitude(const ModeBasis& basis, const Scenario& scenario, DressingScheme scheme,
                                 std::span<const double> times, const AmplitudeOptions& options = {});

// G / eps^2 = sum_k cos(theta_k R) / (2 N Omega omega_k (Omega + omega_k)); chain bases only.
double static_dressing_amplitude(const ModeBasis& basis, double omega, std::size_t separation);

// G_min(N) / eps^2 = sum_k (-1)^k / (2 N Omega omega_k (Omega + omega_k)) for each even N.
std::vector<double> g_min(std::span<const std::size_t> even_sizes, double omega, double length = 1.0,
                          double pinning = 1.0, double speed = 1.0);

}  // namespace fermi
