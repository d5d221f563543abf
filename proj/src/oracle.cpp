#include "fermi/oracle.hpp"

#include "fermi/amplitude.hpp"
#include "fermi/errors.hpp"
#include "fermi/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fermi {

// ---------------------------------------------------------------- Fock space

double FockSpace::count_dimension(std::size_t n_modes, unsigned cutoff) {
    // C(n_modes + cutoff, cutoff)
    double c = 1.0;
    for (unsigned j = 1; j <= cutoff; ++j) c = c * static_cast<double>(n_modes + j) / static_cast<double>(j);
    return 4.0 * std::round(c);
}

FockSpace::FockSpace(std::size_t n_modes, unsigned cutoff) : n_modes_(n_modes), cutoff_(cutoff) {
    if (n_modes == 0) throw InvalidParameters("Fock space: need at least one mode");
    const double dim = count_dimension(n_modes, cutoff);
    if (dim > kMaxDimension) {
        std::ostringstream os;
        os << "Fock space: dimension " << dim << " for " << n_modes << " modes at cutoff " << cutoff
           << " exceeds the limit " << kMaxDimension << "; reduce the number of modes or the phonon cutoff";
        throw InvalidParameters(os.str());
    }

    std::vector<unsigned> occ(n_modes, 0);
    // lexicographic enumeration of occupations with total <= cutoff
    auto rec = [&](auto&& self, std::size_t mode, unsigned left) -> void {
        if (mode == n_modes) {
            lookup_.emplace(occ, occupations_.size());
            occupations_.push_back(occ);
            totals_.push_back(cutoff - left);
            return;
        }
        for (unsigned n = 0; n <= left; ++n) {
            occ[mode] = n;
            self(self, mode + 1, left - n);
        }
        occ[mode] = 0;
    };
    rec(rec, 0, cutoff);
}

std::size_t FockSpace::index(SpinPattern spins, std::span<const unsigned> occupation) const {
    const std::vector<unsigned> key(occupation.begin(), occupation.end());
    const auto it = lookup_.find(key);
    if (it == lookup_.end()) throw std::out_of_range("Fock space: occupation not in the truncated space");
    return static_cast<std::size_t>(spins) * occupations_.size() + it->second;
}

namespace {

std::vector<unsigned> dense_occupation(std::size_t n_modes, const Phonons& phonons) {
    std::vector<unsigned> occ(n_modes, 0);
    for (const auto& [mode, count] : phonons.modes) {
        if (mode >= n_modes) throw std::out_of_range("Fock space: phonon mode index out of range");
        occ[mode] += count;
    }
    return occ;
}

}  // namespace

std::size_t FockSpace::index(SpinPattern spins, const Phonons& phonons) const {
    const auto occ = dense_occupation(n_modes_, phonons);
    return index(spins, occ);
}

bool FockSpace::contains(const Phonons& phonons) const {
    for (const auto& [mode, count] : phonons.modes) {
        if (mode >= n_modes_) return false;
    }
    return phonons.total() <= cutoff_;
}

// ---------------------------------------------------------------- Hamiltonian

double OracleHamiltonian::coupling_scale() const {
    const std::size_t dim = fock.dimension();
    std::vector<double> rows(dim, 0.0);
    for (const SparseC* v : {&v_a, &v_b}) {
        for (int col = 0; col < v->outerSize(); ++col) {
            for (SparseC::InnerIterator it(*v, col); it; ++it) rows[static_cast<std::size_t>(it.row())] += std::abs(it.value());
        }
    }
    return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

double OracleHamiltonian::frequency_scale() const {
    // energies span field + spin parts; the largest transition frequency is bounded by the sum below
    double w_max = 0.0;
    double spin = 0.0;
    const std::size_t occ = fock.n_occupations();
    // single-phonon energies relative to vacuum in the down-down block
    for (std::size_t i = 0; i < occ; ++i) {
        if (fock.total_of(i) == 1) w_max = std::max(w_max, energies[i] - energies[0]);
    }
    // |Omega_A| = |E(up,down) - E(down,down)| etc.
    spin = std::max(std::abs(energies[occ] - energies[0]), std::abs(energies[2 * occ] - energies[0]));
    return w_max + spin + std::abs(epsilon) * coupling_scale();
}

Eigen::MatrixXcd OracleHamiltonian::dense(double t) const {
    const auto dim = static_cast<Eigen::Index>(fock.dimension());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = energies[static_cast<std::size_t>(i)];
    h += epsilon * f_a(t) * Eigen::MatrixXcd(v_a) + epsilon * f_b(t) * Eigen::MatrixXcd(v_b);
    return h;
}

double OracleHamiltonian::energy(double t, const Eigen::VectorXcd& psi) const {
    Eigen::VectorXcd hp = epsilon * f_a(t) * (v_a * psi) + epsilon * f_b(t) * (v_b * psi);
    for (Eigen::Index i = 0; i < psi.size(); ++i) hp(i) += energies[static_cast<std::size_t>(i)] * psi(i);
    return psi.dot(hp).real();
}

OracleHamiltonian build_hamiltonian(const ModeBasis& basis, const Scenario& scenario, unsigned cutoff) {
    scenario.validate(basis.n_sites());
    if (cutoff < 1) throw InvalidParameters("oracle: phonon cutoff must be >= 1");
    OracleHamiltonian h{FockSpace(basis.n_modes(), cutoff), {}, {}, {}, scenario.epsilon, scenario.opening_a,
                        scenario.opening_b};
    const FockSpace& fock = h.fock;
    const std::size_t dim = fock.dimension();
    const std::size_t modes = basis.n_modes();

    h.energies.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const SpinPattern s = fock.spins_of(i);
        const auto& occ = fock.occupation_of(i);
        double e = 0.0;
        for (std::size_t k = 0; k < modes; ++k) e += basis.frequency(k) * occ[k];
        e += 0.5 * (spin_a_up(s) ? scenario.omega_a : -scenario.omega_a);
        e += 0.5 * (spin_b_up(s) ? scenario.omega_b : -scenario.omega_b);
        h.energies[i] = e;
    }

    auto build_v = [&](std::size_t site, bool flip_a) {
        std::vector<Eigen::Triplet<cplx>> triplets;
        std::vector<unsigned> target;
        for (std::size_t col = 0; col < dim; ++col) {
            const SpinPattern s = fock.spins_of(col);
            const SpinPattern s_new = flip_a ? make_spins(!spin_a_up(s), spin_b_up(s))
                                             : make_spins(spin_a_up(s), !spin_b_up(s));
            const auto& occ = fock.occupation_of(col);
            const unsigned total = fock.total_of(col);
            for (std::size_t k = 0; k < modes; ++k) {
                const cplx lam = basis.coupling(site, k);
                if (occ[k] > 0) {  // lambda a_k
                    target = occ;
                    --target[k];
                    triplets.emplace_back(static_cast<int>(fock.index(s_new, target)), static_cast<int>(col),
                                          lam * std::sqrt(static_cast<double>(occ[k])));
                }
                if (total < fock.cutoff()) {  // conj(lambda) a_k^dag
                    target = occ;
                    ++target[k];
                    triplets.emplace_back(static_cast<int>(fock.index(s_new, target)), static_cast<int>(col),
                                          std::conj(lam) * std::sqrt(static_cast<double>(occ[k] + 1)));
                }
            }
        }
        SparseC v(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        v.setFromTriplets(triplets.begin(), triplets.end());
        v.makeCompressed();
        return v;
    };
    h.v_a = build_v(scenario.site_a, true);
    h.v_b = build_v(scenario.site_b, false);
    return h;
}

// ---------------------------------------------------------------- evolution

double max_time_step(const OracleHamiltonian& h) {
    const double scale = h.frequency_scale();
    return scale > 0.0 ? 1.0 / (50.0 * scale) : 1.0;
}

namespace {

// dc/dt = -i eps e^{iEt} (f_A V_A + f_B V_B) e^{-iEt} c
void derivative(const OracleHamiltonian& h, double t, const Eigen::VectorXcd& c, Eigen::VectorXcd& scratch,
                Eigen::VectorXcd& out) {
    const auto dim = c.size();
    for (Eigen::Index i = 0; i < dim; ++i) scratch(i) = std::polar(1.0, -h.energies[static_cast<std::size_t>(i)] * t) * c(i);
    const double ga = h.epsilon * h.f_a(t);
    const double gb = h.epsilon * h.f_b(t);
    out.setZero();
    if (ga != 0.0) out.noalias() += ga * (h.v_a * scratch);
    if (gb != 0.0) out.noalias() += gb * (h.v_b * scratch);
    for (Eigen::Index i = 0; i < dim; ++i) {
        out(i) = cplx(0.0, -1.0) * std::polar(1.0, h.energies[static_cast<std::size_t>(i)] * t) * out(i);
    }
}

Eigen::VectorXcd to_schrodinger(const OracleHamiltonian& h, double t, const Eigen::VectorXcd& c) {
    Eigen::VectorXcd psi(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) psi(i) = std::polar(1.0, -h.energies[static_cast<std::size_t>(i)] * t) * c(i);
    return psi;
}

}  // namespace

EvolutionResult evolve(const OracleHamiltonian& h, const Eigen::VectorXcd& initial, double t0, double t_final,
                       double dt, std::span<const std::size_t> tracked, std::size_t n_records) {
    const auto dim = static_cast<Eigen::Index>(h.fock.dimension());
    if (initial.size() != dim) throw InvalidParameters("evolve: initial state has the wrong dimension");
    if (!(t_final >= t0)) throw InvalidParameters("evolve: t_final must be >= t0");
    for (std::size_t idx : tracked) {
        if (idx >= h.fock.dimension()) throw std::out_of_range("evolve: tracked index out of range");
    }
    const double dt_max = max_time_step(h);
    if (dt <= 0.0) dt = 0.25 * dt_max;
    if (dt > dt_max * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "evolve: dt = " << dt << " exceeds the stability bound " << dt_max << " = 1/(50 * " << h.frequency_scale() << ")";
        throw InvalidParameters(os.str());
    }

    const double span = t_final - t0;
    const std::size_t steps = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / dt)) : 0;
    const double h_step = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    const std::size_t every = (n_records > 0 && steps > 0) ? std::max<std::size_t>(1, steps / n_records) : 0;

    EvolutionResult result;
    Eigen::VectorXcd c = initial;
    const double norm0 = c.norm();
    const double e0 = h.energy(t0, to_schrodinger(h, t0, c));

    std::vector<Eigen::VectorXcd> rows;
    auto record = [&](double t) {
        if (tracked.empty()) return;
        Eigen::VectorXcd row(static_cast<Eigen::Index>(tracked.size()));
        for (std::size_t j = 0; j < tracked.size(); ++j) row(static_cast<Eigen::Index>(j)) = c(static_cast<Eigen::Index>(tracked[j]));
        rows.push_back(std::move(row));
        result.times.push_back(t);
    };
    record(t0);

    Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim), scratch(dim);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + h_step * static_cast<double>(s);
        derivative(h, t, c, scratch, k1);
        tmp = c + 0.5 * h_step * k1;
        derivative(h, t + 0.5 * h_step, tmp, scratch, k2);
        tmp = c + 0.5 * h_step * k2;
        derivative(h, t + 0.5 * h_step, tmp, scratch, k3);
        tmp = c + h_step * k3;
        derivative(h, t + h_step, tmp, scratch, k4);
        c += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (every > 0 && ((s + 1) % every == 0 || s + 1 == steps)) record(s + 1 == steps ? t_final : t + h_step);
    }
    if (every == 0 && steps > 0) record(t_final);

    result.norm_drift = std::abs(c.norm() - norm0);
    if (result.norm_drift > 1e-6) {
        std::ostringstream os;
        os << "evolve: norm drift " << result.norm_drift << " exceeds 1e-6; reduce dt (currently " << h_step << ")";
        throw NumericalFailure(os.str());
    }
    result.energy_drift = std::abs(h.energy(t_final, to_schrodinger(h, t_final, c)) - e0);
    if (!tracked.empty()) {
        result.projections.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(tracked.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) result.projections.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    }
    result.state = std::move(c);
    return result;
}

double sector_leakage(const FockSpace& fock, const Eigen::VectorXcd& state) {
    double worst = 0.0;
    for (std::size_t i = 0; i < fock.dimension(); ++i) {
        const SpinPattern s = fock.spins_of(i);
        const bool sz_zero = s == SpinPattern::UpDown || s == SpinPattern::DownUp;
        const bool even = fock.total_of(i) % 2 == 0;
        if (sz_zero != even) worst = std::max(worst, std::abs(state(static_cast<Eigen::Index>(i))));
    }
    return worst;
}

// ---------------------------------------------------------------- amplitude checks

cplx exact_swap_amplitude(const ModeBasis& basis, const Scenario& scenario, double t, unsigned cutoff, double dt) {
    if (!(t >= 0.0)) throw InvalidParameters("oracle: t must be >= 0");
    const OracleHamiltonian h = build_hamiltonian(basis, scenario, cutoff);
    const auto start = h.fock.index(SpinPattern::UpDown, Phonons::vacuum());
    const auto target = h.fock.index(SpinPattern::DownUp, Phonons::vacuum());
    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.fock.dimension()));
    c0(static_cast<Eigen::Index>(start)) = 1.0;
    // the scenario profiles act on t >= 0 only
    const EvolutionResult r = evolve(h, c0, 0.0, t, dt);
    return r.state(static_cast<Eigen::Index>(target));
}

ConvergedAmplitude converged_swap_amplitude(const ModeBasis& basis, const Scenario& scenario, double t,
                                            double tolerance, unsigned start_cutoff, unsigned max_cutoff, double dt) {
    if (start_cutoff < 1 || max_cutoff <= start_cutoff) throw InvalidParameters("oracle: need 1 <= start_cutoff < max_cutoff");
    ConvergedAmplitude out;
    out.cutoff = start_cutoff;
    out.amplitude = exact_swap_amplitude(basis, scenario, t, start_cutoff, dt);
    for (unsigned c = start_cutoff + 1; c <= max_cutoff; ++c) {
        const cplx next = exact_swap_amplitude(basis, scenario, t, c, dt);
        out.last_change = std::abs(next - out.amplitude);
        out.amplitude = next;
        out.cutoff = c;
        if (out.last_change <= tolerance) return out;
    }
    std::ostringstream os;
    os << "oracle: cutoff did not converge by " << max_cutoff << " (last change " << out.last_change << ")";
    throw NumericalFailure(os.str());
}

double fitted_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidParameters("slope fit: size mismatch");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    const double nd = static_cast<double>(n);
    const double den = nd * sxx - sx * sx;
    return den != 0.0 ? (nd * sxy - sx * sy) / den : 0.0;
}

ResidualSweep residual_sweep(const ModeBasis& basis, const Scenario& scenario, double t,
                             std::span<const double> epsilons, double tolerance, double dt) {
    const std::vector<double> eps(epsilons.begin(), epsilons.end());
    const std::vector<double> at{t};
    ResidualSweep sweep;
    sweep.points = parallel_map(eps, [&](const double& e) {
        Scenario s = scenario;
        s.epsilon = e;
        ResidualPoint p;
        p.epsilon = e;
        p.perturbative = bare_amplitude(basis, s, at).total.front();
        if (e == 0.0) {
            p.exact = exact_swap_amplitude(basis, s, t, 2, dt);
            p.cutoff = 2;
        } else {
            const ConvergedAmplitude c = converged_swap_amplitude(basis, s, t, tolerance, 2, 8, dt);
            p.exact = c.amplitude;
            p.cutoff = c.cutoff;
        }
        p.residual = std::abs(p.exact - p.perturbative);
        return p;
    });
    std::vector<double> xs, ys;
    for (const auto& p : sweep.points) {
        xs.push_back(p.epsilon);
        ys.push_back(p.residual);
    }
    sweep.slope = fitted_log_slope(xs, ys);
    return sweep;
}

Eigen::VectorXcd to_fock_vector(const FockSpace& fock, const StateExpansion& state) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fock.dimension()));
    for (const auto& term : state.terms) {
        if (!fock.contains(term.phonons)) continue;
        v(static_cast<Eigen::Index>(fock.index(term.spins, term.phonons))) += std::pow(state.epsilon, term.order) * term.coeff;
    }
    return v;
}

AdiabaticReport adiabatic_dressing_check(const ModeBasis& basis, const Scenario& scenario, double tau,
                                         unsigned cutoff, double dt) {
    if (!(tau > 0.0)) throw InvalidParameters("adiabatic check: tau must be > 0");
    if (cutoff < 2) throw InvalidParameters("adiabatic check: cutoff must be >= 2 to hold the second-order state");
    Scenario s = scenario;
    const OpeningFunction ramp = OpeningFunction::exp_ramp(tau, OpeningFunction::constant());
    s.opening_a = ramp;
    s.opening_b = ramp;

    const OracleHamiltonian h = build_hamiltonian(basis, s, cutoff);
    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.fock.dimension()));
    const double t0 = -10.0 * tau;
    // |down down 0> at t0, written in the interaction picture
    const auto start = h.fock.index(SpinPattern::DownDown, Phonons::vacuum());
    c0(static_cast<Eigen::Index>(start)) = std::polar(1.0, h.energies[start] * t0);
    const EvolutionResult r = evolve(h, c0, t0, 0.0, dt);

    Eigen::VectorXcd g = to_fock_vector(h.fock, dressed_ground_state(basis, s));
    g.normalize();
    AdiabaticReport report;
    report.tau = tau;
    report.overlap = std::abs(g.dot(r.state)) / r.state.norm();
    report.norm_drift = r.norm_drift;
    return report;
}

}  // namespace fermi
