#include "phononcool/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "output.hpp"
#include "phononcool/constants.hpp"
#include "phononcool/corrections.hpp"
#include "phononcool/dynamics.hpp"

namespace phononcool::cli {

namespace {

void append_protocol(Metadata& meta, const ProtocolParams& p)
{
    meta.emplace_back("g_rad_per_s", p.g);
    meta.emplace_back("tau_s", p.tau);
    meta.emplace_back("pulse_area", p.pulse_area());
    meta.emplace_back("r_a_per_s", p.r_a);
    meta.emplace_back("kappa_per_s", p.kappa);
    meta.emplace_back("ra_over_kappa", p.kappa > 0.0 ? p.ra_over_kappa() : 0.0);
    meta.emplace_back("n_th", p.n_th);
    meta.emplace_back("p_e", p.p_e);
}

void log_warnings(const Diagnostics& diag, std::ostream& log)
{
    for (const auto& w : diag.warnings) {
        log << "warning: " << w.message << '\n';
    }
}

std::size_t truncation_for(const RunConfig& c, double n_th)
{
    if (c.run.n_max) {
        return *c.run.n_max;
    }
    return thermal_distribution_auto(n_th).n_max();
}

PhononDistribution initial_state(const RunConfig& c, const ProtocolParams& p, std::size_t n_max)
{
    switch (c.run.initial) {
    case InitialState::vacuum: return PhononDistribution::vacuum(n_max);
    case InitialState::fock:
        if (c.run.fock_level > n_max) throw ConfigError("initial Fock level exceeds n_max");
        return PhononDistribution::fock(c.run.fock_level, n_max);
    case InitialState::thermal: break;
    }
    return thermal_distribution(p.n_th, n_max);
}

struct Output {
    Metadata meta;
    Table table;
};

Output run_evolve(const RunConfig& c, std::ostream& log)
{
    const auto p = c.resolve_protocol();
    if (!(p.r_a > 0.0)) throw ConfigError("evolve reports time in units of 1/r_a and needs r_a > 0");
    Diagnostics diag;
    p.check_coarse_graining(&diag);
    const auto n_max = truncation_for(c, p.n_th);
    const auto kick = build_kick_map(p.g, p.tau, p.p_e, n_max);
    const auto gen = build_generator(p, kick, n_max);

    const double t_end = c.run.t_end_ra / p.r_a;
    std::vector<double> samples(c.run.samples);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = t_end * static_cast<double>(i) / static_cast<double>(samples.size() - 1);
    }
    samples.back() = t_end;
    const auto trace = evolve(initial_state(c, p, n_max), gen, t_end, samples);
    log_warnings(diag, log);

    Output o;
    append_protocol(o.meta, p);
    o.meta.emplace_back("n_max", static_cast<std::int64_t>(n_max));
    o.meta.emplace_back("time_unit", std::string("1/r_a"));
    o.table.columns = {"t_ra", "mean_n", "p0"};
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        o.table.rows.push_back({trace.times[i] * p.r_a, trace.mean_n[i], trace.p0[i]});
    }
    return o;
}

Output run_strobe(const RunConfig& c, std::ostream& log)
{
    const auto p = c.resolve_protocol();
    if (!(p.r_a > 0.0)) throw ConfigError("strobe needs r_a > 0");
    Diagnostics diag;
    p.check_coarse_graining(&diag);
    const auto n_max = truncation_for(c, p.n_th);
    const auto kick = build_kick_map(p.g, p.tau, p.p_e, n_max);
    const auto trace = evolve_stroboscopic(initial_state(c, p, n_max), p, kick, c.run.n_kicks);
    log_warnings(diag, log);

    Output o;
    append_protocol(o.meta, p);
    o.meta.emplace_back("n_max", static_cast<std::int64_t>(n_max));
    o.meta.emplace_back("time_unit", std::string("1/r_a"));
    o.table.columns = {"kick", "t_ra", "mean_n_before", "mean_n_after", "p0_before", "p0_after"};
    for (std::size_t i = 0; i < trace.kick_times.size(); ++i) {
        o.table.rows.push_back({static_cast<std::int64_t>(i + 1), trace.kick_times[i] * p.r_a, trace.mean_before[i],
                                trace.mean_after[i], trace.p0_before[i], trace.p0_after[i]});
    }
    return o;
}

Output run_steady(const RunConfig& c, std::ostream& log)
{
    const auto p = c.resolve_protocol();
    Diagnostics diag;
    p.check_coarse_graining(&diag);
    const auto n_max = c.run.n_max ? *c.run.n_max : default_n_max(p.n_th);
    const auto kick = build_kick_map(p.g, p.tau, p.p_e, n_max);
    const auto ss = steady_state_analytic(p, kick, n_max);
    log_warnings(diag, log);

    Output o;
    append_protocol(o.meta, p);
    o.meta.emplace_back("n_max", static_cast<std::int64_t>(ss.populations.n_max()));
    o.meta.emplace_back("mean_n_s", ss.mean_n_s);
    o.meta.emplace_back("delta_n", ss.delta_n);
    o.meta.emplace_back("p0_s", ss.p0_s);
    o.table.columns = {"n", "p_n"};
    for (std::size_t n = 0; n < ss.populations.size(); ++n) {
        o.table.rows.push_back({static_cast<std::int64_t>(n), ss.populations[n]});
    }
    return o;
}

struct SweepPoint {
    double n_th;
    double ratio;
    double p;
};

Output run_sweep(const RunConfig& c, std::ostream& log)
{
    const auto& s = *c.sweep;
    const auto base = c.resolve_protocol();
    const auto env = c.environment();
    const double area = s.pulse_area ? *s.pulse_area : base.pulse_area();

    std::vector<SweepPoint> points;
    for (double ratio : s.ra_over_kappa) {
        for (double p : s.p) {
            for (double n_th : s.n_th_grid()) {
                points.push_back({n_th, ratio, p});
            }
        }
    }

    std::vector<SteadyStateResult> results;
    results.reserve(points.size());
    std::vector<std::optional<SteadyStateResult>> slots(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    auto solve = [&](std::size_t i) {
        const auto& pt = points[i];
        ProtocolParams params = base;
        params.n_th = pt.n_th;
        params.r_a = pt.ratio * base.kappa;
        params.tau = area / base.g;
        params.p_e = pt.p;
        const auto n_max = c.run.n_max ? *c.run.n_max : default_n_max(pt.n_th);
        if (s.with_fidelity) {
            CorrectionOptions opt;
            opt.p_override = pt.p;
            opt.apply_fidelity = true;
            slots[i] = corrected_steady_state(params, *env, n_max, opt);
        }
        else {
            slots[i] = steady_state_analytic(params, build_kick_map_for_area(area, pt.p, n_max), n_max);
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                solve(i);
            }
            catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::min<std::size_t>(c.run.jobs, std::max<std::size_t>(points.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t j = 1; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        worker();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    if (s.with_fidelity) {
        Diagnostics diag;
        kick_fidelity(relaxation_rate(*env, env->omega0), base.g, area / base.g, 1, &diag);
        log_warnings(diag, log);
    }

    Output o;
    append_protocol(o.meta, base);
    o.meta.emplace_back("sweep_pulse_area", area);
    o.meta.emplace_back("with_fidelity", s.with_fidelity);
    if (env) {
        o.meta.emplace_back("alpha_g", env->alpha_g);
        o.meta.emplace_back("gamma_omega0_per_s", relaxation_rate(*env, env->omega0));
    }
    o.table.columns = {"N_th", "ra_over_kappa", "p", "mean_n_s", "delta_n", "p0_s"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& r = *slots[i];
        o.table.rows.push_back({points[i].n_th, points[i].ratio, points[i].p, r.mean_n_s, r.delta_n, r.p0_s});
    }
    return o;
}

Output run_device(const RunConfig& c, std::ostream& log)
{
    const auto& d = *c.device;
    ProtocolParams p;
    QubitEnvironment env;
    try {
        std::tie(p, env) = derive_protocol(d.device, d.timing);
    }
    catch (const DomainError& e) {
        throw ConfigError(std::string("[device] ") + e.what());
    }
    const double gamma_ej = relaxation_rate(env, env.E_J / si::hbar);
    const double gamma0 = relaxation_rate(env, env.omega0);
    ScheduleInputs in;
    in.g = p.g;
    in.gamma_EJ = gamma_ej;
    in.r_a = p.r_a;
    in.tau = p.tau;
    in.reset_multiplier = d.reset_multiplier;
    in.gamma0 = gamma0;
    in.kappa = p.kappa;
    const auto sched = duty_cycle_schedule(in);
    Diagnostics diag;
    p.check_coarse_graining(&diag);
    const double f0 = kick_fidelity(gamma0, p.g, p.tau, 1, &diag);
    for (const auto& v : sched.violations) {
        diag.warn(WarningCode::schedule, v);
    }
    log_warnings(diag, log);

    Output o;
    append_protocol(o.meta, p);
    o.meta.emplace_back("budget_closes", sched.budget_closes);
    o.meta.emplace_back("violations", sched.violations);
    o.table.columns = {"quantity", "value", "unit"};
    auto row = [&o](const char* name, double v, const char* unit) {
        o.table.rows.push_back({std::string(name), v, std::string(unit)});
    };
    const auto& dev = d.device;
    row("g", p.g, "rad/s");
    row("tau", p.tau, "s");
    row("pulse_area", p.pulse_area(), "rad");
    row("r_a", p.r_a, "1/s");
    row("kappa", p.kappa, "1/s");
    row("ra_over_kappa", p.ra_over_kappa(), "1");
    row("n_th", p.n_th, "1");
    row("p_excited", p.p_e, "1");
    row("C_sigma", dev.total_capacitance(), "F");
    row("E_c", dev.charging_energy(), "J");
    row("n_x", dev.cooper_pair_number(), "1");
    row("alpha_g", env.alpha_g, "1");
    row("gamma_EJ", gamma_ej, "1/s");
    row("gamma_omega0", gamma0, "1/s");
    row("heating_scale", gamma0 * p.tau / 2.0, "1");
    row("fidelity_F0", f0, "1");
    row("cooling_floor", cooling_floor(p, env), "1");
    row("period", sched.period, "s");
    row("reset_time", sched.reset_time, "s");
    row("cycle_time", sched.cycle_time, "s");
    row("max_r_a", sched.max_rate, "1/s");
    row("reset_fidelity", sched.reset_fidelity, "1");
    row("budget_closes", sched.budget_closes ? 1.0 : 0.0, "bool");
    row("violations", static_cast<double>(sched.violations.size()), "count");
    return o;
}

} // namespace

void run(const RunConfig& config, std::ostream& out, std::ostream& log)
{
    config.validate();
    Output o;
    switch (config.mode) {
    case Mode::evolve: o = run_evolve(config, log); break;
    case Mode::stroboscopic: o = run_strobe(config, log); break;
    case Mode::steady: o = run_steady(config, log); break;
    case Mode::sweep: o = run_sweep(config, log); break;
    case Mode::device_report: o = run_device(config, log); break;
    }

    std::ostringstream buffer;
    if (config.format == OutputFormat::csv) {
        write_csv(buffer, o.table);
    }
    else {
        write_json(buffer, mode_name(config.mode), o.meta, o.table);
    }
    if (config.output_path.empty() || config.output_path == "-") {
        out << buffer.str();
        return;
    }
    std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw ConfigError("cannot write output file " + config.output_path);
    }
    file << buffer.str();
    if (!file) {
        throw ConfigError("failed writing output file " + config.output_path);
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Periodic qubit-resonator cooling simulator"};
    std::string config_path;
    std::string preset;
    std::string output;
    std::string format;
    std::optional<std::size_t> n_max;
    std::optional<std::size_t> jobs;
    bool with_fidelity = false;

    app.add_option("--config", config_path, "configuration file");
    app.add_option("--preset", preset, "built-in parameter set")
        ->check(CLI::IsMember({"fig2", "fig3", "device-paper"}));
    app.add_option("--output", output, "output file (default: standard output)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--n-max", n_max, "Fock-space truncation");
    app.add_option("--jobs", jobs, "concurrent sweep points");
    app.add_flag("--with-fidelity", with_fidelity, "apply the kick fidelity correction in sweeps");

    const std::vector<std::pair<std::string, Mode>> subcommands{
        {"evolve", Mode::evolve},
        {"strobe", Mode::stroboscopic},
        {"steady", Mode::steady},
        {"sweep", Mode::sweep},
        {"device", Mode::device_report},
    };
    const std::vector<std::string> help{
        "coarse-grained time evolution", "periodic kicks with exact free damping", "steady-state populations",
        "steady states over an N_th x r_a/kappa x p grid", "derived device parameters and cycle budget"};
    for (std::size_t i = 0; i < subcommands.size(); ++i) {
        app.add_subcommand(subcommands[i].first, help[i])->fallthrough();
    }
    app.require_subcommand(1);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        Mode mode = Mode::steady;
        for (const auto& [name, m] : subcommands) {
            if (app.got_subcommand(name)) mode = m;
        }
        if (config_path.empty() == preset.empty()) {
            throw ConfigError("give exactly one of --config or --preset");
        }
        RunConfig config = preset.empty() ? load_config_file(config_path, mode)
                                          : load_config_text(*preset_text(preset), mode);
        if (!output.empty()) config.output_path = output;
        if (!format.empty()) config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        if (n_max) config.run.n_max = *n_max;
        if (jobs) config.run.jobs = *jobs;
        if (with_fidelity) {
            if (!config.sweep) throw ConfigError("--with-fidelity applies to sweep runs");
            config.sweep->with_fidelity = true;
        }
        run(config, out, err);
        return exit_ok;
    }
    catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace phononcool::cli
