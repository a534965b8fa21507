#pragma once

#include <string>

#include "polykinetic/coupled_stepper.hpp"
#include "polykinetic/initial_data.hpp"

namespace polykinetic {

struct SolverSpec {
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    double outer_tol = 1e-10;
    int max_outer = 30;
    double krylov_tol = 1e-12;
    int krylov_restart = 60;

    bool operator==(const SolverSpec&) const = default;
};

struct OutputSpec {
    int cadence = 1;
    std::string directory = ".";
    int checkpoint_every = 0;

    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    std::string name = "run";
    PhysicalParams physics{};
    PotentialSpec potential{};
    double L = 10.0;
    double C0 = 0.5;
    double delta = 1e-4;
    int steps = 0;  // 0: dt from the (L, C0, T) link; > 0: fixed count, link disabled
    Resolution resolution{};
    double side = 1.0;
    InitialSpec initial{};
    bool frozen_velocity = false;
    SolverSpec solver{};
    OutputSpec output{};

    bool operator==(const RunConfig&) const = default;
};

// Flat "[section]" / "key = value" text; '#' starts a comment. Errors carry line numbers.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Canonical text: every key, fixed order, numbers with 17 significant digits.
std::string emit_config(const RunConfig& cfg);
std::string config_fingerprint(const RunConfig& cfg);

CutoffSchedule make_schedule(const RunConfig& cfg);
// Validated setup with initial data from the presets.
RunSetup make_setup(const RunConfig& cfg);

} // namespace polykinetic
