#include "fermi/cli/commands.hpp"

#include "fermi/amplitude.hpp"
#include "fermi/causality.hpp"
#include "fermi/cli/csv.hpp"
#include "fermi/dressing.hpp"
#include "fermi/nonperturbative_ion.hpp"
#include "fermi/oracle.hpp"
#include "fermi/parallel.hpp"
#include "fermi/phonon_cloud.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#ifndef FERMI_LATTICE_VERSION
#define FERMI_LATTICE_VERSION "0.0.0"
#endif

namespace fermi::cli {

json RunManifest::to_json() const {
    return json{{"tool", tool},          {"version", version},   {"command", command},
                {"scenario", scenario_path}, {"scenario_hash", scenario_hash}, {"wall_time_s", wall_time},
                {"outputs", outputs},    {"summary", summary},   {"warnings", warnings}};
}

namespace {

struct Context {
    const ScenarioFile& file;
    std::string out;
    RunManifest& manifest;
    std::ostream& diag;

    void save(const CsvTable& table, const std::string& path) {
        table.save(path);
        manifest.outputs.push_back(path);
    }
    void warn(const std::string& message) {
        manifest.warnings.push_back(message);
        diag << "warning: " << message << '\n';
    }
};

// {"start", "stop", "count"} or an explicit array; an empty grid is a usage error.
std::vector<double> parse_grid(const Node& node) {
    std::vector<double> grid;
    if (node.value().is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) grid.push_back(node.at(i).number());
    } else {
        node.allow_keys({"start", "stop", "count"});
        const double start = node.number_or("start", 0.0);
        const double stop = node.at("stop").number();
        const std::size_t count = node.at("count").count();
        grid = uniform_grid(start, stop, count);
    }
    if (grid.empty()) node.fail("empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) node.fail("grid must be strictly increasing");
    }
    return grid;
}

std::vector<double> time_grid(const Context& ctx, const Node& run, double default_stop) {
    if (run.has("times")) {
        auto g = parse_grid(run.at("times"));
        if (g.front() < 0.0) run.at("times").fail("times must be >= 0");
        return g;
    }
    const std::size_t points = run.has("points") ? run.at("points").count() : 201;
    if (points == 0) run.at("points").fail("empty grid");
    (void)ctx;
    return uniform_grid(0.0, default_stop, points);
}

double default_stop(const Scenario& s) {
    const double window = std::min(s.opening_a.post_ramp().support_end(), s.opening_b.post_ramp().support_end());
    return std::isfinite(window) ? window : s.duration;
}

DressingScheme parse_scheme(const Node& node) {
    const std::string name = node.string();
    if (name == "sigma_x") return DressingScheme::SigmaX;
    if (name == "sigma_plus") return DressingScheme::SigmaPlus;
    if (name == "bare") return DressingScheme::Bare;
    node.fail(fmt::format("unknown dressing scheme \"{}\" (expected sigma_x, sigma_plus or bare)", name));
}

QuadratureOptions parse_quadrature(const Node& run) {
    QuadratureOptions q;
    if (run.has("method")) {
        const std::string m = run.at("method").string();
        if (m == "auto") q.method = IntegrationMethod::Auto;
        else if (m == "closed_form") q.method = IntegrationMethod::ClosedForm;
        else if (m == "quadrature") q.method = IntegrationMethod::Quadrature;
        else run.at("method").fail(fmt::format("unknown method \"{}\" (expected auto, closed_form or quadrature)", m));
    }
    q.rel_tol = run.number_or("rel_tol", q.rel_tol);
    if (!(q.rel_tol > 0.0)) run.at("rel_tol").fail("rel_tol must be > 0");
    return q;
}

void check_sites(const Node& where, const ModeBasis& basis, std::size_t a, std::size_t b) {
    if (a >= basis.n_sites() || b >= basis.n_sites()) {
        where.fail(fmt::format("site index out of range ({}, {}) for {} sites", a, b, basis.n_sites()));
    }
}

// ---------------------------------------------------------------- causality

void cmd_causality(Context& ctx) {
    const Node run = ctx.file.run();
    run.allow_keys({"mode", "tau", "n_sweep", "separation_fraction", "lightcone", "distance", "display_scale"});
    const std::string mode = run.string_or("mode", "trace");
    const Scenario& s = ctx.file.scenario;

    if (mode == "distance") {
        const Node d = run.at("distance");
        d.allow_keys({"tau", "from", "to"});
        const ModeBasis basis = build_basis(ctx.file);
        const double tau = d.at("tau").number();
        const std::size_t n = basis.n_sites();
        const std::size_t from = d.has("from") ? d.at("from").count() : 1;
        const std::size_t to = d.has("to") ? d.at("to").count() : n - 1;
        if (from > to || to >= n) d.fail(fmt::format("distance range [{}, {}] invalid for {} sites", from, to, n));
        CsvTable table({"r", "f_a", "f_c"});
        for (std::size_t r = from; r <= to; ++r) {
            const std::size_t b = (s.site_a + r) % n;
            table.add({r, anticommutator(basis, s.site_a, b, tau), commutator(basis, s.site_a, b, tau)});
        }
        ctx.save(table, ctx.out);
        ctx.manifest.summary = {{"mode", "distance"}, {"tau", tau}, {"rows", table.rows()}};
        return;
    }
    if (mode != "trace") run.at("mode").fail(fmt::format("unknown causality mode \"{}\" (expected trace or distance)", mode));

    const std::vector<double> taus = parse_grid(run.at("tau"));
    std::vector<std::size_t> sizes;
    if (run.has("n_sweep")) {
        if (!ctx.file.chain) run.at("n_sweep").fail("size sweeps need a chain system");
        const Node ns = run.at("n_sweep");
        for (std::size_t i = 0; i < ns.size(); ++i) sizes.push_back(ns.at(i).count());
        if (sizes.empty()) ns.fail("empty size sweep");
    } else {
        sizes.push_back(ctx.file.chain ? ctx.file.chain->n_sites : ctx.file.trap->n_ions);
    }
    const bool has_fraction = run.has("separation_fraction");
    const double fraction = run.number_or("separation_fraction", 0.0);
    const std::string scale = run.string_or("display_scale", "none");
    if (scale != "none" && scale != "n") run.at("display_scale").fail("display_scale must be \"none\" or \"n\"");

    bool lightcone = true;
    bool lightcone_requested = false;
    double lc_tau_max = 0.0;
    std::size_t lc_samples = 2000;
    if (run.has("lightcone")) {
        const Node lc_node = run.at("lightcone");
        lc_node.allow_keys({"enabled", "tau_max", "samples"});
        lightcone = lc_node.boolean_or("enabled", true);
        lightcone_requested = lightcone;
        lc_tau_max = lc_node.number_or("tau_max", 0.0);
        lc_samples = lc_node.has("samples") ? lc_node.at("samples").count() : 2000;
    }

    struct Result {
        std::size_t n{0}, a{0}, b{0};
        CausalityTrace trace;
        std::optional<LightconeEstimate> estimate;
        std::string note;
    };
    std::vector<Result> results = parallel_map(sizes, [&](const std::size_t& n) {
        Result r;
        r.n = n;
        const ModeBasis basis = (ctx.file.chain && n != ctx.file.chain->n_sites) ? build_basis(ctx.file, n) : build_basis(ctx.file);
        r.a = s.site_a;
        r.b = has_fraction ? (s.site_a + static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)))) % n : s.site_b;
        check_sites(run, basis, r.a, r.b);
        r.trace = causality_trace(basis, r.a, r.b, taus);
        if (lightcone) {
            double tmax = lc_tau_max;
            if (tmax <= 0.0) tmax = ctx.file.chain ? ctx.file.chain->length / (2.0 * ctx.file.chain->speed) : taus.back();
            try {
                r.estimate = lightcone_estimate(basis, r.a, r.b, tmax, lc_samples);
            } catch (const NoRiseDetected& e) {
                // an explicitly requested estimate must not be dropped silently
                if (lightcone_requested) throw;
                r.note = e.what();
            }
        }
        return r;
    });

    auto trace_table = [&](const Result& r) {
        std::vector<std::string> header{"tau", "f_a", "f_c"};
        if (scale == "n") {
            header.push_back("n_f_a");
            header.push_back("n_f_c");
        }
        CsvTable t(header);
        const double nd = static_cast<double>(r.n);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            if (scale == "n") t.add({taus[i], r.trace.f_a[i], r.trace.f_c[i], nd * r.trace.f_a[i], nd * r.trace.f_c[i]});
            else t.add({taus[i], r.trace.f_a[i], r.trace.f_c[i]});
        }
        return t;
    };
    CsvTable summary({"n_sites", "site_a", "site_b", "rise_time", "nominal_time", "sharpness"});
    json rows = json::array();
    for (const auto& r : results) {
        if (!r.note.empty()) ctx.warn(r.note);
        if (r.estimate) {
            summary.add({r.n, r.a, r.b, r.estimate->rise_time, r.estimate->nominal_time, r.estimate->sharpness});
            rows.push_back({{"n_sites", r.n}, {"rise_time", r.estimate->rise_time}, {"nominal_time", r.estimate->nominal_time},
                            {"sharpness", r.estimate->sharpness}});
        }
    }
    if (results.size() == 1) {
        ctx.save(trace_table(results.front()), ctx.out);
        if (summary.rows() > 0) ctx.save(summary, derived_path(ctx.out, "summary"));
    } else {
        ctx.save(summary, ctx.out);
        for (const auto& r : results) ctx.save(trace_table(r), derived_path(ctx.out, fmt::format("N{}", r.n)));
    }
    ctx.manifest.summary = {{"mode", "trace"}, {"lightcone", rows}};
}

// ---------------------------------------------------------------- bare

void cmd_bare(Context& ctx) {
    const Node run = ctx.file.run();
    run.allow_keys({"times", "points", "per_mode", "method", "rel_tol"});
    const Scenario& s = ctx.file.scenario;
    const ModeBasis basis = build_basis(ctx.file);
    const std::vector<double> times = time_grid(ctx, run, default_stop(s));
    AmplitudeOptions opts;
    opts.quadrature = parse_quadrature(run);
    opts.keep_per_mode = run.boolean_or("per_mode", false);

    const AmplitudeTrace trace = bare_amplitude(basis, s, times, opts);
    const double causal = nominal_causal_time(basis, s.site_a, s.site_b);
    const double window = std::min({times.back(), s.opening_a.post_ramp().support_end(), s.opening_b.post_ramp().support_end()});
    if (window >= causal) {
        ctx.warn(fmt::format("interaction window {} is not shorter than the nominal causal time {}", window, causal));
    }

    CsvTable table({"t", "a0_re", "a0_im", "ac_re", "ac_im", "a_re", "a_im", "abs_a0", "abs_ac", "probability"});
    double p_max = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const cplx a0 = trace.a0[i], ac = trace.ac[i], a = trace.total[i];
        table.add({times[i], a0.real(), a0.imag(), ac.real(), ac.imag(), a.real(), a.imag(), std::abs(a0), std::abs(ac),
                   trace.probability[i]});
        p_max = std::max(p_max, trace.probability[i]);
    }
    ctx.save(table, ctx.out);
    if (opts.keep_per_mode) {
        CsvTable modes({"t", "k", "omega_k", "re", "im"});
        for (std::size_t i = 0; i < times.size(); ++i) {
            for (std::size_t k = 0; k < basis.n_modes(); ++k) {
                const cplx v = trace.per_mode(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
                modes.add({times[i], k, basis.frequency(k), v.real(), v.imag()});
            }
        }
        ctx.save(modes, derived_path(ctx.out, "modes"));
    }
    ctx.manifest.summary = {{"commutator_ratio", trace.commutator_ratio()},
                            {"max_probability", p_max},
                            {"final_probability", trace.probability.back()},
                            {"nominal_causal_time", causal}};
}

// ---------------------------------------------------------------- dressed

void cmd_dressed(Context& ctx) {
    const Node run = ctx.file.run();
    run.allow_keys({"table", "times", "points", "schemes", "method", "rel_tol", "separations", "n_values"});
    const Scenario& s = ctx.file.scenario;
    const std::string table_kind = run.string_or("table", "trace");

    if (table_kind == "static") {
        if (!ctx.file.chain) ctx.file.root().at("system").fail("static dressing needs a chain system");
        const ModeBasis basis = build_basis(ctx.file);
        const std::size_t n = basis.n_sites();
        std::size_t from = 0, to = n / 2;
        if (run.has("separations")) {
            const Node r = run.at("separations");
            r.allow_keys({"from", "to"});
            from = r.has("from") ? r.at("from").count() : from;
            to = r.has("to") ? r.at("to").count() : to;
            if (from > to || to >= n) r.fail(fmt::format("separation range [{}, {}] invalid for {} sites", from, to, n));
        }
        const double eps2 = s.epsilon * s.epsilon;
        CsvTable table({"r", "g_over_eps2", "g"});
        for (std::size_t r = from; r <= to; ++r) {
            const double g = static_dressing_amplitude(basis, s.omega_a, r);
            table.add({r, g, eps2 * g});
        }
        ctx.save(table, ctx.out);
        ctx.manifest.summary = {{"table", "static"}, {"omega", s.omega_a}, {"rows", table.rows()}};
        return;
    }
    if (table_kind == "g_min") {
        if (!ctx.file.chain) ctx.file.root().at("system").fail("G_min needs a chain system");
        std::vector<std::size_t> sizes;
        const Node nv = run.at("n_values");
        if (nv.value().is_array()) {
            for (std::size_t i = 0; i < nv.size(); ++i) sizes.push_back(nv.at(i).count());
        } else {
            nv.allow_keys({"from", "to", "step"});
            const std::size_t from = nv.at("from").count(), to = nv.at("to").count();
            const std::size_t step = nv.has("step") ? nv.at("step").count() : 2;
            if (step == 0) nv.at("step").fail("step must be > 0");
            for (std::size_t n = from; n <= to; n += step) sizes.push_back(n);
        }
        if (sizes.empty()) nv.fail("empty size list");
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            if (sizes[i] == 0 || sizes[i] % 2 != 0) nv.fail(fmt::format("G_min needs even sizes (got {})", sizes[i]));
        }
        const auto& c = *ctx.file.chain;
        const std::vector<double> g = g_min(sizes, s.omega_a, c.length, c.pinning, c.speed);
        CsvTable table({"n_sites", "g_min_over_eps2"});
        for (std::size_t i = 0; i < sizes.size(); ++i) table.add({sizes[i], g[i]});
        ctx.save(table, ctx.out);
        ctx.manifest.summary = {{"table", "g_min"}, {"omega", s.omega_a}, {"rows", table.rows()}};
        return;
    }
    if (table_kind != "trace") run.at("table").fail(fmt::format("unknown table \"{}\" (expected trace, static or g_min)", table_kind));

    std::vector<DressingScheme> schemes{DressingScheme::SigmaX, DressingScheme::SigmaPlus, DressingScheme::Bare};
    if (run.has("schemes")) {
        schemes.clear();
        const Node sn = run.at("schemes");
        for (std::size_t i = 0; i < sn.size(); ++i) schemes.push_back(parse_scheme(sn.at(i)));
        if (schemes.empty()) sn.fail("empty scheme list");
    }
    const ModeBasis basis = build_basis(ctx.file);
    const std::vector<double> times = time_grid(ctx, run, default_stop(s));
    AmplitudeOptions opts;
    opts.quadrature = parse_quadrature(run);

    const std::vector<AmplitudeTrace> traces = parallel_map(schemes, [&](const DressingScheme& scheme) {
        return dressed_amplitude(basis, s, scheme, times, opts);
    });

    std::vector<std::string> header{"t"};
    json columns = json::object();
    for (std::size_t j = 0; j < schemes.size(); ++j) {
        header.push_back(fmt::format("p{}", j + 1));
        columns[header.back()] = to_string(schemes[j]);
    }
    CsvTable table(header);
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<Field> row{times[i]};
        for (const auto& tr : traces) row.emplace_back(tr.probability[i]);
        table.add(std::move(row));
    }
    ctx.save(table, ctx.out);
    json finals = json::object();
    for (std::size_t j = 0; j < schemes.size(); ++j) finals[header[j + 1]] = traces[j].probability.back();
    ctx.manifest.summary = {{"table", "trace"}, {"columns", columns}, {"final_probability", finals}};
}

// ---------------------------------------------------------------- ion2

void cmd_ion2(Context& ctx) {
    const Node run = ctx.file.run();
    run.allow_keys({"alpha_scan", "schmidt_cutoff", "pulses"});
    if (!ctx.file.trap || ctx.file.trap->n_ions != 2) {
        ctx.file.root().at("system").fail("ion2 needs a trap system with n_ions = 2");
    }
    const ModeBasis basis = build_basis(ctx.file);
    const double w0 = basis.frequency(0);
    const double w1 = basis.frequency(1);
    const ThermalGroundState thermal = symplectic_temperature(w0, w1);

    std::size_t cutoff = 2;
    if (run.has("schmidt_cutoff")) {
        const Node c = run.at("schmidt_cutoff");
        if (c.integer() < 2) c.fail("schmidt_cutoff must be an integer >= 2");
        cutoff = c.count();
    }

    PulseSpec pulse{1.0, 1.0};
    std::string pulse_source = "default";
    if (run.has("pulses")) {
        const Node p = run.at("pulses");
        if (p.value().is_string()) {
            if (p.string() != "from_scenario") p.fail("pulses must be an object or \"from_scenario\"");
            const Scenario& s = ctx.file.scenario;
            pulse = pulse_from_profile(s.epsilon, w0, s.opening_a, s.opening_b, s.duration);
            pulse_source = "from_scenario";
        } else {
            p.allow_keys({"alpha_a", "alpha_b"});
            pulse = {p.at("alpha_a").number(), p.at("alpha_b").number()};
            pulse_source = "explicit";
        }
    }

    std::vector<double> alphas = uniform_grid(0.0, 3.0, 301);
    if (run.has("alpha_scan")) alphas = parse_grid(run.at("alpha_scan"));

    CsvTable scan({"alpha", "amplitude", "probability", "amplitude_full", "probability_full"});
    for (double a : alphas) {
        const SwapResult r = swap_probability({a, a}, thermal);
        const SwapResult f = swap_probability_full({a, a}, thermal, cutoff);
        scan.add({a, r.amplitude, r.probability, f.amplitude, f.probability});
    }
    ctx.save(scan, ctx.out);

    const SwapResult at_one = swap_probability({1.0, 1.0}, thermal);
    const SwapResult chosen = swap_probability(pulse, thermal);
    const SwapResult chosen_full = swap_probability_full(pulse, thermal, cutoff);
    const double alpha_opt = optimal_equal_pulse(thermal);
    CsvTable summary({"lambda", "beta", "e_minus_beta", "p_at_alpha_1", "alpha_opt", "alpha_a", "alpha_b", "p_pulse",
                      "p_pulse_full", "schmidt_cutoff"});
    summary.add({thermal.lambda, thermal.beta, thermal.e_minus_beta, at_one.probability, alpha_opt, pulse.alpha_a,
                 pulse.alpha_b, chosen.probability, chosen_full.probability, cutoff});
    ctx.save(summary, derived_path(ctx.out, "summary"));
    ctx.manifest.summary = {{"omega0", w0},
                            {"omega1", w1},
                            {"lambda", thermal.lambda},
                            {"beta", thermal.beta},
                            {"e_minus_beta", thermal.e_minus_beta},
                            {"p_at_alpha_1", at_one.probability},
                            {"alpha_opt", alpha_opt},
                            {"pulse_source", pulse_source},
                            {"p_pulse", chosen.probability},
                            {"p_pulse_full", chosen_full.probability}};
}

// ---------------------------------------------------------------- cloud

void cmd_cloud(Context& ctx) {
    const Node run = ctx.file.run();
    run.allow_keys({"times", "points", "scheme", "split", "method", "rel_tol"});
    const Scenario& s = ctx.file.scenario;
    const DressingScheme scheme = run.has("scheme") ? parse_scheme(run.at("scheme")) : DressingScheme::Bare;
    const bool split = run.boolean_or("split", true);
    const ModeBasis basis = build_basis(ctx.file);
    const std::vector<double> times = time_grid(ctx, run, default_stop(s));
    const QuadratureOptions q = parse_quadrature(run);

    const auto snapshots = parallel_map(times, [&](const double& t) { return single_site_distributions(basis, s, scheme, t, q); });

    std::vector<std::string> header{"t", "n", "d_n"};
    if (split) {
        header.push_back("d_up");
        header.push_back("d_down");
    }
    CsvTable table(header);
    double d_max = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto& [up, down] = snapshots[i];
        for (std::size_t n = 0; n < up.d.size(); ++n) {
            const double d = up.d[n] + down.d[n];
            d_max = std::max(d_max, d);
            if (split) table.add({times[i], n, d, up.d[n], down.d[n]});
            else table.add({times[i], n, d});
        }
    }
    ctx.save(table, ctx.out);
    ctx.manifest.summary = {{"scheme", to_string(scheme)},
                            {"max_d", d_max},
                            {"note", "D_n is a nonlocal diagnostic, not a measurable site occupation"}};
}

// ---------------------------------------------------------------- oracle-check

void cmd_oracle_check(Context& ctx) {
    const Node run = ctx.file.run();
    run.allow_keys({"epsilons", "time", "tolerance", "dt", "cutoff", "trace"});
    const Scenario& s = ctx.file.scenario;
    const ModeBasis basis = build_basis(ctx.file);
    const double t = run.number_or("time", s.duration);
    if (!(t >= 0.0)) run.at("time").fail("time must be >= 0");
    const double tol = run.number_or("tolerance", 1e-14);
    const double dt = run.number_or("dt", 0.0);

    std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
    if (run.has("epsilons")) {
        eps.clear();
        const Node e = run.at("epsilons");
        for (std::size_t i = 0; i < e.size(); ++i) {
            eps.push_back(e.at(i).number());
            if (eps.back() < 0.0) e.at(i).fail("epsilon must be >= 0");
        }
        if (eps.empty()) e.fail("empty epsilon list");
    }

    CsvTable table({"epsilon", "residual", "exact_re", "exact_im", "pert_re", "pert_im", "cutoff"});
    double slope = 0.0;
    if (run.has("cutoff")) {
        const unsigned cutoff = static_cast<unsigned>(run.at("cutoff").count());
        // refuse oversized spaces before any work
        if (FockSpace::count_dimension(basis.n_modes(), cutoff) > FockSpace::kMaxDimension) {
            throw InvalidParameters(fmt::format("oracle: Fock dimension {} for {} modes at cutoff {} exceeds {}; reduce the cutoff or the system size",
                                                FockSpace::count_dimension(basis.n_modes(), cutoff), basis.n_modes(), cutoff,
                                                FockSpace::kMaxDimension));
        }
        const std::vector<double> at{t};
        const auto points = parallel_map(eps, [&](const double& e) {
            Scenario se = s;
            se.epsilon = e;
            ResidualPoint p;
            p.epsilon = e;
            p.exact = exact_swap_amplitude(basis, se, t, cutoff, dt);
            p.perturbative = bare_amplitude(basis, se, at).total.front();
            p.residual = std::abs(p.exact - p.perturbative);
            p.cutoff = cutoff;
            return p;
        });
        std::vector<double> xs, ys;
        for (const auto& p : points) {
            table.add({p.epsilon, p.residual, p.exact.real(), p.exact.imag(), p.perturbative.real(), p.perturbative.imag(), p.cutoff});
            xs.push_back(p.epsilon);
            ys.push_back(p.residual);
        }
        slope = fitted_log_slope(xs, ys);
    } else {
        const ResidualSweep sweep = residual_sweep(basis, s, t, eps, tol, dt);
        for (const auto& p : sweep.points) {
            table.add({p.epsilon, p.residual, p.exact.real(), p.exact.imag(), p.perturbative.real(), p.perturbative.imag(), p.cutoff});
        }
        slope = sweep.slope;
    }
    ctx.save(table, ctx.out);

    if (run.has("trace")) {
        const Node tr = run.at("trace");
        tr.allow_keys({"epsilon", "count", "cutoff"});
        Scenario se = s;
        se.epsilon = tr.number_or("epsilon", eps.front());
        const std::size_t count = tr.has("count") ? tr.at("count").count() : 101;
        if (count < 2) tr.fail("trace needs at least 2 records");
        const unsigned cutoff = static_cast<unsigned>(tr.has("cutoff") ? tr.at("cutoff").count() : 2);
        const OracleHamiltonian h = build_hamiltonian(basis, se, cutoff);
        Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.fock.dimension()));
        c0(static_cast<Eigen::Index>(h.fock.index(SpinPattern::UpDown, Phonons::vacuum()))) = 1.0;
        const std::vector<std::size_t> tracked{h.fock.index(SpinPattern::DownUp, Phonons::vacuum())};
        const EvolutionResult r = evolve(h, c0, 0.0, t, dt, tracked, count - 1);
        const AmplitudeTrace pert = bare_amplitude(basis, se, r.times);
        CsvTable cmp({"t", "p_exact", "p_pert"});
        for (std::size_t i = 0; i < r.times.size(); ++i) {
            cmp.add({r.times[i], std::norm(r.projections(static_cast<Eigen::Index>(i), 0)), pert.probability[i]});
        }
        ctx.save(cmp, derived_path(ctx.out, "trace"));
    }
    ctx.manifest.summary = {{"time", t}, {"fitted_slope", slope}, {"points", table.rows()}};
}

const std::map<std::string, std::function<void(Context&)>>& registry() {
    static const std::map<std::string, std::function<void(Context&)>> r{
        {"causality", cmd_causality}, {"bare", cmd_bare},   {"dressed", cmd_dressed},
        {"ion2", cmd_ion2},           {"cloud", cmd_cloud}, {"oracle-check", cmd_oracle_check}};
    return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"causality", "bare", "dressed", "ion2", "cloud", "oracle-check"};
    return names;
}

RunManifest run_command(const std::string& command, const ScenarioFile& file, const std::string& out,
                        std::ostream& info, std::ostream& diag, bool quiet) {
    const auto& reg = registry();
    const auto it = reg.find(command);
    if (it == reg.end()) throw SchemaError(fmt::format("unknown command \"{}\"", command));

    RunManifest manifest;
    manifest.version = FERMI_LATTICE_VERSION;
    manifest.command = command;
    manifest.scenario_path = file.path;
    manifest.scenario_hash = file.hash();

    const auto start = std::chrono::steady_clock::now();
    Context ctx{file, out, manifest, diag};
    it->second(ctx);
    manifest.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string manifest_path = out + ".manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
    if (!mf) throw std::runtime_error("cannot write \"" + manifest_path + "\"");
    mf << manifest.to_json().dump(2) << '\n';

    if (!quiet) {
        info << command << ": " << manifest.summary.dump() << '\n';
        for (const auto& o : manifest.outputs) info << "  wrote " << o << '\n';
    }
    return manifest;
}

}  // namespace fermi::cli
