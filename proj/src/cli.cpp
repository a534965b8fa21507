#include "polykinetic/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "polykinetic/checkpoint.hpp"
#include "polykinetic/config.hpp"
#include "polykinetic/errors.hpp"
#include "polykinetic/functionals.hpp"
#include "polykinetic/kernels.hpp"
#include "polykinetic/scenarios.hpp"
#include "polykinetic/selftest.hpp"
#include "polykinetic/trace_io.hpp"

namespace polykinetic {

namespace {

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidParameter: return kExitConfig;
    case ErrorKind::Audit: return kExitAudit;
    default: return kExitSolver;
    }
}

struct Flags {
    std::string output_dir = ".";
    int cadence = 0;
    int checkpoint_every = -1;
};

int execute(RunConfig cfg, const Flags& flags, bool output_dir_given)
{
    if (output_dir_given) cfg.output.directory = flags.output_dir;
    if (flags.cadence > 0) cfg.output.cadence = flags.cadence;
    if (flags.checkpoint_every >= 0) cfg.output.checkpoint_every = flags.checkpoint_every;
    std::filesystem::create_directories(cfg.output.directory);
    const std::filesystem::path dir(cfg.output.directory);

    RunSetup setup = make_setup(cfg);
    setup.failure_checkpoint = (dir / (cfg.name + ".failed.chk")).string();
    const Resolution res = cfg.resolution;
    const int every = cfg.output.checkpoint_every;
    const std::string fp = setup.fingerprint;
    if (every > 0)
        setup.observer = [&, every](const DiagnosticsRecord& r, const State& s) {
            if (r.step % every == 0)
                write_checkpoint((dir / (cfg.name + ".step" + std::to_string(r.step) + ".chk")).string(), s, fp, res,
                                 {{"theta", std::to_string(cfg.potential.theta)},
                                  {"s_inf", std::to_string(cfg.potential.s_inf)}});
        };
    spdlog::info("{}: dt = {:.6g}, N = {}, L = {}, isa = {}", cfg.name, setup.schedule.dt, setup.schedule.N,
                 setup.schedule.L, kernels::isa_name(kernels::active_isa()));
    const auto disc = build_spaces(setup.params, setup.chain, setup.resolution, setup.domain);
    const RunTrace trace = run(setup, *disc);
    const std::string csv = (dir / (cfg.name + ".csv")).string();
    write_trace_csv(trace, csv, cfg.output.cadence);

    const BudgetAudit budget = energy_budget_audit(trace);
    const double gamma0 = decay_rate_bound(setup.params, setup.chain.a0, trace.kappa, setup.domain);
    std::printf("trace            %s\n", csv.c_str());
    std::printf("fingerprint      %s\n", trace.fingerprint.c_str());
    std::printf("steps            %zu (dt = %.6g)\n", trace.records.size(), setup.schedule.dt);
    std::printf("free energy      %.6e -> %.6e\n", trace.initial.free_energy,
                trace.records.empty() ? trace.initial.free_energy : trace.records.back().free_energy);
    std::printf("budget min slack %.3e\n", budget.min_slack);
    std::printf("gamma0           %.6g (torus Poincare constant)\n", gamma0);
    if (setup.params.body_force.kind == ForceKind::Zero && trace.records.size() >= 2) {
        try {
            std::printf("fitted rate      %.6g\n", decay_fit(trace));
        } catch (const Error&) {
            std::printf("fitted rate      n/a (no signal)\n");
        }
    }
    std::printf("moment bound     %s\n", trace.moments_within_bound ? "holds" : "VIOLATED");
    std::vector<TraceRow> rows = read_trace_csv(csv);
    const TraceAudit audit = audit_trace_rows(rows);
    for (const auto& f : audit.failures) std::fprintf(stderr, "audit: %s\n", f.c_str());
    return audit.ok() && trace.moments_within_bound ? kExitOk : kExitAudit;
}

int audit_file(const std::string& path)
{
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail(ErrorKind::Io, "cannot open " + path);
    char magic[8] = {};
    probe.read(magic, 8);
    if (std::string(magic, 8) == "PKCHKPT1") {
        const Checkpoint c = read_checkpoint(path);
        bool finite = true;
        for (double v : c.state.u.values) finite = finite && std::isfinite(v);
        for (double v : c.state.psi.coeffs) finite = finite && std::isfinite(v);
        std::printf("checkpoint %s: step %d, t = %s, fingerprint %s, values %s\n", path.c_str(), c.state.step,
                    c.header.at("t").c_str(), c.header.at("fingerprint").c_str(), finite ? "finite" : "NON-FINITE");
        return finite ? kExitOk : kExitAudit;
    }
    const TraceAudit a = audit_trace_rows(read_trace_csv(path));
    std::printf("rows %d, min budget slack %.3e, min ck gap %.3e, min ls gap %.3e, max mass error %.3e\n", a.rows,
                a.min_budget_slack, a.min_ck_gap, a.min_ls_gap, a.max_mass_error);
    for (const auto& f : a.failures) std::printf("FAIL %s\n", f.c_str());
    return a.ok() ? kExitOk : kExitAudit;
}

} // namespace

int cli_main(int argc, char** argv)
{
    CLI::App app{"polykinetic: Navier-Stokes-Fokker-Planck simulator for dilute polymer fluids"};
    app.require_subcommand(1);
    Flags flags;
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")->capture_default_str();

    auto* run_cmd = app.add_subcommand("run", "run a simulation from a config file");
    std::string config_path;
    run_cmd->add_option("config", config_path, "configuration file")->required();
    auto* audit_cmd = app.add_subcommand("audit", "audit a trace CSV or a checkpoint");
    std::string audit_path;
    audit_cmd->add_option("file", audit_path, "trace.csv or checkpoint")->required();
    auto* scen_cmd = app.add_subcommand("scenario", "run a preset scenario");
    std::string scenario;
    bool emit = false;
    scen_cmd->add_option("name", scenario, "decay-demo|equilibrium|forced|ou-oracle|dumbbell-k2")->required();
    scen_cmd->add_flag("--emit-config", emit, "print the preset's canonical config and exit");
    auto* self_cmd = app.add_subcommand("selftest", "run the invariant suite");

    CLI::Option* out_opt = nullptr;
    for (auto* c : {run_cmd, scen_cmd}) {
        auto* o = c->add_option("--output-dir", flags.output_dir, "directory for traces and checkpoints");
        if (c == run_cmd) out_opt = o;
        c->add_option("--cadence", flags.cadence, "write every n-th step to the trace");
        c->add_option("--checkpoint-every", flags.checkpoint_every, "checkpoint every n steps (0: never)");
        c->add_option("--log-level", log_level, "trace|debug|info|warn|error|off");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    spdlog::set_level(spdlog::level::from_str(log_level));
    spdlog::set_default_logger(spdlog::stderr_color_mt("polykinetic"));
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (*run_cmd) {
            const bool given = out_opt && out_opt->count() > 0;
            return execute(load_config(config_path), flags, given);
        }
        if (*scen_cmd) {
            RunConfig cfg = scenario_config(scenario);
            if (emit) {
                std::cout << emit_config(cfg);
                return kExitOk;
            }
            return execute(cfg, flags, true);
        }
        if (*audit_cmd) return audit_file(audit_path);
        if (*self_cmd) {
            bool ok = true;
            for (const auto& c : run_selftest()) {
                std::printf("%s  %-62s %.3e (tol %.1e)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                            c.tolerance);
                ok = ok && c.pass;
            }
            return ok ? kExitOk : kExitAudit;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", error_kind_name(e.kind()), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitOk;
}

} // namespace polykinetic
