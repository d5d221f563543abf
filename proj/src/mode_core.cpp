#include "fermi/mode_core.hpp"

#include "fermi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

namespace fermi {

const char* to_string(BasisKind kind) noexcept {
    switch (kind) {
    case BasisKind::HarmonicChain: return "chain";
    case BasisKind::IonTrap: return "trap";
    case BasisKind::Custom: return "custom";
    }
    return "?";
}

// ---------------------------------------------------------------- parameters

namespace {

// L^2 nu^2 / (2 N^2 c^2), i.e. 1 - alpha without cancellation
double one_minus_alpha(const ChainParams& p) noexcept {
    const double n = static_cast<double>(p.n_sites);
    return (p.length * p.length * p.pinning * p.pinning) / (2.0 * n * n * p.speed * p.speed);
}

}  // namespace

double ChainParams::alpha() const noexcept {
    return 1.0 - one_minus_alpha(*this);
}

double ChainParams::e0() const noexcept {
    return pinning / std::sqrt(one_minus_alpha(*this));
}

void ChainParams::validate() const {
    if (n_sites < 1) throw InvalidParameters("chain: n_sites must be >= 1");
    if (!(length > 0.0)) throw InvalidParameters("chain: length L must be > 0");
    if (!(pinning > 0.0)) throw InvalidParameters("chain: pinning frequency nu must be > 0");
    if (!(speed > 0.0)) throw InvalidParameters("chain: speed c must be > 0");
    const double gap = one_minus_alpha(*this);
    if (!(gap < 1.0)) {
        std::ostringstream os;
        os << "chain: alpha = 1 - L^2 nu^2/(2 N^2 c^2) = " << alpha()
           << " violates alpha > 0 (need L nu < sqrt(2) N c)";
        throw InvalidParameters(os.str());
    }
    if (!(gap > 0.0)) {
        std::ostringstream os;
        os << "chain: alpha = " << alpha() << " violates alpha < 1";
        throw InvalidParameters(os.str());
    }
}

void TrapParams::validate() const {
    if (n_ions < 2) throw InvalidParameters("trap: n_ions must be >= 2");
    if (!(base_frequency > 0.0)) throw InvalidParameters("trap: base frequency omega_0 must be > 0");
}

void Scenario::validate(std::size_t n_sites) const {
    if (site_a >= n_sites || site_b >= n_sites) {
        std::ostringstream os;
        os << "scenario: sites (" << site_a << ", " << site_b << ") out of range for " << n_sites << " sites";
        throw std::out_of_range(os.str());
    }
    if (site_a == site_b) throw InvalidParameters("scenario: site_a and site_b must differ");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidParameters("scenario: epsilon must be finite and >= 0");
    if (!(duration >= 0.0)) throw InvalidParameters("scenario: duration T must be >= 0");
    if (!std::isfinite(omega_a) || !std::isfinite(omega_b)) throw InvalidParameters("scenario: level splittings must be finite");
}

// ---------------------------------------------------------------- ModeBasis

ModeBasis::ModeBasis(BasisKind kind, std::vector<double> frequencies, Eigen::MatrixXcd couplings)
    : kind_(kind), frequencies_(std::move(frequencies)), couplings_(std::move(couplings)) {
    if (frequencies_.empty()) throw InvalidParameters("mode basis: no modes");
    if (static_cast<std::size_t>(couplings_.cols()) != frequencies_.size()) {
        throw InvalidParameters("mode basis: coupling matrix must have one column per mode");
    }
    if (couplings_.rows() < 1) throw InvalidParameters("mode basis: no sites");
    for (double w : frequencies_) {
        if (!(w > 0.0) || !std::isfinite(w)) throw InvalidParameters("mode basis: all frequencies must be finite and > 0");
    }
    const double defect = normalization_defect();
    if (!(defect <= 1e-10)) {
        std::ostringstream os;
        os << "mode basis: canonical normalization sum_k 2 omega_k |lambda_nk|^2 = 1 violated by " << defect;
        throw InvalidParameters(os.str());
    }
}

double ModeBasis::max_frequency() const noexcept {
    return *std::max_element(frequencies_.begin(), frequencies_.end());
}

double ModeBasis::normalization_defect() const {
    double worst = 0.0;
    for (Eigen::Index n = 0; n < couplings_.rows(); ++n) {
        double s = 0.0;
        for (std::size_t k = 0; k < frequencies_.size(); ++k) {
            s += 2.0 * frequencies_[k] * std::norm(couplings_(n, static_cast<Eigen::Index>(k)));
        }
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

// ---------------------------------------------------------------- chain

namespace {

// e^{2 pi i m / N}, exact on the quarter points
cplx unit_phase(std::size_t m, std::size_t n) {
    if (m == 0) return {1.0, 0.0};
    if (4 * m == n) return {0.0, 1.0};
    if (2 * m == n) return {-1.0, 0.0};
    if (4 * m == 3 * n) return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace

ModeBasis build_harmonic_chain(const ChainParams& params) {
    params.validate();
    const std::size_t n = params.n_sites;
    const double gap = one_minus_alpha(params);
    const double alpha = params.alpha();

    // omega_k = nu sqrt(1 + 2 alpha sin^2(theta_k/2) / (1 - alpha)); equal to E_0 sqrt(1 - alpha cos theta_k)
    std::vector<double> omega(n);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double half = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        const double s = std::sin(half);
        omega[k] = params.pinning * std::sqrt(1.0 + 2.0 * alpha * s * s / gap);
    }
    for (std::size_t k = n / 2 + 1; k < n; ++k) omega[k] = omega[n - k];

    Eigen::MatrixXcd lambda(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double nd = static_cast<double>(n);
    for (std::size_t site = 0; site < n; ++site) {
        const auto r = static_cast<Eigen::Index>(site);
        for (std::size_t k = 0; k <= n / 2; ++k) {
            const double norm = 1.0 / std::sqrt(2.0 * nd * omega[k]);
            lambda(r, static_cast<Eigen::Index>(k)) = norm * unit_phase((k * site) % n, n);
        }
        for (std::size_t k = n / 2 + 1; k < n; ++k) {
            lambda(r, static_cast<Eigen::Index>(k)) = std::conj(lambda(r, static_cast<Eigen::Index>(n - k)));
        }
    }

    ModeBasis basis(BasisKind::HarmonicChain, std::move(omega), std::move(lambda));
    basis.chain_ = params;
    return basis;
}

// ---------------------------------------------------------------- ion trap

namespace {

void trap_gradient_hessian(const std::vector<double>& u, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
    const auto n = static_cast<Eigen::Index>(u.size());
    grad.setZero(n);
    hess.setZero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        grad(i) = u[static_cast<std::size_t>(i)];
        hess(i, i) = 1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)];
            const double ad = std::abs(d);
            grad(i) -= (d > 0 ? 1.0 : -1.0) / (d * d);
            const double c = 2.0 / (ad * ad * ad);
            hess(i, i) += c;
            hess(i, j) = -c;
        }
    }
}

bool strictly_ascending(const std::vector<double>& u) {
    return std::adjacent_find(u.begin(), u.end(), std::greater_equal<>()) == u.end();
}

}  // namespace

TrapEquilibrium solve_trap_equilibrium(std::size_t n_ions, int max_iterations) {
    if (n_ions < 2) throw InvalidParameters("trap: n_ions must be >= 2");
    const double nd = static_cast<double>(n_ions);
    const double spacing = 2.018 / std::pow(nd, 0.559);

    TrapEquilibrium eq;
    eq.positions.resize(n_ions);
    for (std::size_t i = 0; i < n_ions; ++i) {
        eq.positions[i] = (static_cast<double>(i) - 0.5 * (nd - 1.0)) * spacing;
    }

    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    trap_gradient_hessian(eq.positions, grad, hess);
    double residual = grad.cwiseAbs().maxCoeff();

    for (int it = 0; it < max_iterations && residual > 1e-14; ++it) {
        const Eigen::VectorXd step = hess.ldlt().solve(-grad);
        double damping = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving, damping *= 0.5) {
            std::vector<double> trial = eq.positions;
            for (std::size_t i = 0; i < n_ions; ++i) trial[i] += damping * step(static_cast<Eigen::Index>(i));
            if (!strictly_ascending(trial)) continue;
            Eigen::VectorXd g2;
            Eigen::MatrixXd h2;
            trap_gradient_hessian(trial, g2, h2);
            const double r2 = g2.cwiseAbs().maxCoeff();
            if (r2 < residual || halving == 39) {
                eq.positions = std::move(trial);
                grad = std::move(g2);
                hess = std::move(h2);
                residual = r2;
                accepted = true;
                break;
            }
        }
        eq.iterations = it + 1;
        if (!accepted) break;
    }

    eq.residual = residual;
    if (!(residual <= 1e-12)) {
        std::ostringstream os;
        os << "trap equilibrium: Newton iteration did not converge for " << n_ions
           << " ions (residual " << residual << " after " << eq.iterations << " iterations)";
        throw NumericalFailure(os.str());
    }
    eq.hessian = hess;
    return eq;
}

SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double threshold, int max_sweeps) {
    if (a.rows() != a.cols()) throw InvalidParameters("jacobi: matrix must be square");
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());

    auto off_max = [&] {
        double m = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) m = std::max(m, std::abs(a(p, q)));
        return m;
    };

    SymmetricEigen out;
    int sweep = 0;
    for (; sweep < max_sweeps && off_max() > threshold * scale; ++sweep) {
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (off_max() > threshold * scale) {
        std::ostringstream os;
        os << "jacobi: off-diagonal " << off_max() << " above threshold after " << sweep << " sweeps";
        throw NumericalFailure(os.str());
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.values(j) = a(src, src);
        Eigen::VectorXd col = v.col(src);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(col(k)) > 1e-12) {
                if (col(k) < 0) col = -col;
                break;
            }
        }
        out.vectors.col(j) = col;
    }
    out.sweeps = sweep;
    return out;
}

ModeBasis build_ion_trap(const TrapParams& params) {
    params.validate();
    const TrapEquilibrium eq = solve_trap_equilibrium(params.n_ions);
    const SymmetricEigen eig = jacobi_eigen(eq.hessian);

    const auto n = static_cast<Eigen::Index>(params.n_ions);
    std::vector<double> omega(params.n_ions);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!(eig.values(k) > 0.0)) throw NumericalFailure("trap: non-positive Hessian eigenvalue");
        omega[static_cast<std::size_t>(k)] = params.base_frequency * std::sqrt(eig.values(k));
    }

    Eigen::MatrixXcd lambda(n, n);
    for (Eigen::Index site = 0; site < n; ++site) {
        for (Eigen::Index k = 0; k < n; ++k) {
            lambda(site, k) = eig.vectors(site, k) / std::sqrt(2.0 * omega[static_cast<std::size_t>(k)]);
        }
    }

    ModeBasis basis(BasisKind::IonTrap, std::move(omega), std::move(lambda));
    basis.trap_ = params;
    basis.eigenmodes_ = eig.vectors;
    return basis;
}

std::vector<cplx> site_coupling_row(const ModeBasis& basis, std::size_t n) {
    if (n >= basis.n_sites()) {
        throw std::out_of_range("site_coupling_row: site " + std::to_string(n) + " >= " + std::to_string(basis.n_sites()));
    }
    std::vector<cplx> row(basis.n_modes());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = basis.coupling(n, k);
    return row;
}

}  // namespace fermi
