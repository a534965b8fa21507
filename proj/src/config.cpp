#include "polykinetic/config.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

std::string fmt(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out)
{
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

template <class I>
bool parse_int(const std::string& s, I& out)
{
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool parse_triple(const std::string& s, std::array<int, 3>& out)
{
    std::istringstream is(s);
    std::array<int, 3> v{0, 0, 0};
    std::string tok;
    int n = 0;
    while (is >> tok) {
        if (n == 3 || !parse_int(tok, v[n])) return false;
        ++n;
    }
    if (n == 0) return false;
    out = v;
    return true;
}

template <class E>
struct EnumName {
    E value;
    const char* name;
};

const EnumName<ForceKind> kForceKinds[] = {{ForceKind::Zero, "zero"}, {ForceKind::Sinusoidal, "sinusoidal"}};
const EnumName<ForceTimeProfile> kProfiles[] = {
    {ForceTimeProfile::Constant, "constant"}, {ForceTimeProfile::Linear, "linear"}, {ForceTimeProfile::Cosine, "cosine"}};
const EnumName<VelocityPreset> kVelocity[] = {
    {VelocityPreset::Zero, "zero"}, {VelocityPreset::TaylorGreen, "taylor-green"}, {VelocityPreset::Shear, "shear"}};
const EnumName<DensityPreset> kDensity[] = {{DensityPreset::Equilibrium, "equilibrium"},
                                            {DensityPreset::PerturbedMode, "perturbed-mode"},
                                            {DensityPreset::Stretched, "stretched"},
                                            {DensityPreset::Random, "random"},
                                            {DensityPreset::File, "file"}};

template <class E, std::size_t N>
bool parse_enum(const EnumName<E> (&table)[N], const std::string& s, E& out)
{
    for (const auto& e : table)
        if (s == e.name) {
            out = e.value;
            return true;
        }
    return false;
}

template <class E, std::size_t N>
std::string enum_name(const EnumName<E> (&table)[N], E v)
{
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

template <class E, std::size_t N>
std::string enum_choices(const EnumName<E> (&table)[N])
{
    std::string s;
    for (const auto& e : table) s += (s.empty() ? "" : "|") + std::string(e.name);
    return s;
}

struct Field {
    const char* section;
    const char* key;
    const char* type;  // for messages
    std::function<bool(RunConfig&, const std::string&)> parse;
    std::function<std::string(const RunConfig&)> emit;
};

#define PK_DOUBLE(sec, key, member)                                                                       \
    Field{sec, key, "a real number", [](RunConfig& c, const std::string& v) { return parse_double(v, c.member); }, \
          [](const RunConfig& c) { return fmt(c.member); }}
#define PK_INT(sec, key, member)                                                                           \
    Field{sec, key, "an integer", [](RunConfig& c, const std::string& v) { return parse_int(v, c.member); },    \
          [](const RunConfig& c) { return std::to_string(c.member); }}
#define PK_TRIPLE(sec, key, member)                                                                       \
    Field{sec, key, "1 to 3 integers", [](RunConfig& c, const std::string& v) { return parse_triple(v, c.member); }, \
          [](const RunConfig& c) {                                                                        \
              return std::to_string(c.member[0]) + " " + std::to_string(c.member[1]) + " " +              \
                     std::to_string(c.member[2]);                                                         \
          }}
const std::vector<Field>& schema()
{
    static const std::vector<Field> fields = {
        Field{"run", "name", "a string", [](RunConfig& c, const std::string& v) { c.name = v; return !v.empty(); },
              [](const RunConfig& c) { return c.name; }},
        PK_DOUBLE("physics", "nu", physics.nu),
        PK_DOUBLE("physics", "k", physics.k),
        PK_DOUBLE("physics", "lambda", physics.lambda),
        PK_DOUBLE("physics", "epsilon", physics.epsilon),
        PK_INT("physics", "K", physics.K),
        PK_INT("physics", "d", physics.d),
        PK_DOUBLE("physics", "T", physics.T),
        Field{"force", "kind", "zero|sinusoidal",
              [](RunConfig& c, const std::string& v) { return parse_enum(kForceKinds, v, c.physics.body_force.kind); },
              [](const RunConfig& c) { return enum_name(kForceKinds, c.physics.body_force.kind); }},
        PK_DOUBLE("force", "amplitude", physics.body_force.amplitude),
        PK_TRIPLE("force", "mode", physics.body_force.mode),
        Field{"force", "profile", "constant|linear|cosine",
              [](RunConfig& c, const std::string& v) { return parse_enum(kProfiles, v, c.physics.body_force.profile); },
              [](const RunConfig& c) { return enum_name(kProfiles, c.physics.body_force.profile); }},
        PK_DOUBLE("force", "omega", physics.body_force.omega),
        PK_DOUBLE("chain", "theta", potential.theta),
        PK_DOUBLE("chain", "s_inf", potential.s_inf),
        PK_DOUBLE("cutoff", "L", L),
        PK_DOUBLE("cutoff", "C0", C0),
        PK_DOUBLE("cutoff", "delta", delta),
        PK_INT("cutoff", "steps", steps),
        PK_INT("resolution", "x_grid", resolution.x_grid),
        PK_INT("resolution", "q_degree", resolution.q_degree),
        PK_INT("resolution", "radial_per_panel", resolution.radial_per_panel),
        PK_INT("resolution", "angular", resolution.angular),
        PK_DOUBLE("domain", "side", side),
        Field{"initial", "velocity", "zero|taylor-green|shear",
              [](RunConfig& c, const std::string& v) { return parse_enum(kVelocity, v, c.initial.velocity); },
              [](const RunConfig& c) { return enum_name(kVelocity, c.initial.velocity); }},
        PK_DOUBLE("initial", "velocity_amplitude", initial.velocity_amplitude),
        Field{"initial", "density", "equilibrium|perturbed-mode|stretched|random|file",
              [](RunConfig& c, const std::string& v) { return parse_enum(kDensity, v, c.initial.density); },
              [](const RunConfig& c) { return enum_name(kDensity, c.initial.density); }},
        PK_DOUBLE("initial", "density_amplitude", initial.density_amplitude),
        PK_TRIPLE("initial", "density_xmode", initial.density_xmode),
        PK_TRIPLE("initial", "density_qmode", initial.density_qmode),
        PK_DOUBLE("initial", "density_angle", initial.density_angle),
        Field{"initial", "density_file", "a path",
              [](RunConfig& c, const std::string& v) { c.initial.density_file = v; return true; },
              [](const RunConfig& c) { return c.initial.density_file; }},
        PK_INT("initial", "seed", initial.seed),
        Field{"initial", "frozen_velocity", "true|false",
              [](RunConfig& c, const std::string& v) {
                  if (v != "true" && v != "false") return false;
                  c.frozen_velocity = v == "true";
                  return true;
              },
              [](const RunConfig& c) { return std::string(c.frozen_velocity ? "true" : "false"); }},
        PK_DOUBLE("solver", "picard_tol", solver.picard_tol),
        PK_INT("solver", "picard_max_iter", solver.picard_max_iter),
        PK_DOUBLE("solver", "outer_tol", solver.outer_tol),
        PK_INT("solver", "max_outer", solver.max_outer),
        PK_DOUBLE("solver", "krylov_tol", solver.krylov_tol),
        PK_INT("solver", "krylov_restart", solver.krylov_restart),
        PK_INT("output", "cadence", output.cadence),
        Field{"output", "directory", "a path",
              [](RunConfig& c, const std::string& v) { c.output.directory = v; return !v.empty(); },
              [](const RunConfig& c) { return c.output.directory; }},
        PK_INT("output", "checkpoint_every", output.checkpoint_every),
    };
    return fields;
}

#undef PK_DOUBLE
#undef PK_INT
#undef PK_TRIPLE

ChainSpec chain_of(const RunConfig& cfg)
{
    if (cfg.physics.K < 1) fail(ErrorKind::InvalidParameter, "K must be >= 1");
    return make_chain(cfg.physics.K, cfg.potential);
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::vector<std::string> errors;
    std::istringstream is(text);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back(where + "malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& f : schema()) known = known || section == f.section;
            if (!known) errors.push_back(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + "expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const Field* field = nullptr;
        for (const auto& f : schema())
            if (section == f.section && key == f.key) field = &f;
        if (!field) {
            errors.push_back(where + "unknown key '" + key + "' in [" + section + "]");
            continue;
        }
        if (!field->parse(cfg, value))
            errors.push_back(where + "'" + key + "' expects " + field->type + ", got '" + value + "'");
    }
    if (errors.empty()) {
        try {
            validate_params(cfg.physics, chain_of(cfg));
            make_schedule(cfg);
            if (cfg.resolution.x_grid < 4 || cfg.resolution.x_grid % 2) errors.push_back("x_grid must be even and >= 4");
            if (cfg.resolution.q_degree < 1) errors.push_back("q_degree must be >= 1");
            if (!(cfg.side > 0.0)) errors.push_back("side must be > 0");
            if (cfg.output.cadence < 1) errors.push_back("cadence must be >= 1");
        } catch (const Error& e) {
            errors.push_back(e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        fail(ErrorKind::Config, msg);
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& cfg)
{
    std::string out, section;
    for (const auto& f : schema()) {
        if (section != f.section) {
            section = f.section;
            out += (out.empty() ? "[" : "\n[") + section + "]\n";
        }
        out += std::string(f.key) + " = " + f.emit(cfg) + "\n";
    }
    return out;
}

std::string config_fingerprint(const RunConfig& cfg)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : emit_config(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CutoffSchedule make_schedule(const RunConfig& cfg)
{
    CutoffSchedule s = cfg.steps > 0 ? fixed_step_schedule(cfg.L, cfg.physics.T, cfg.steps)
                                     : cutoff_schedule(cfg.L, cfg.C0, cfg.physics.T);
    s.delta = cfg.delta;
    s.C0 = cfg.C0;
    return s;
}

RunSetup make_setup(const RunConfig& cfg)
{
    RunSetup s;
    s.params = cfg.physics;
    s.chain = chain_of(cfg);
    validate_params(s.params, s.chain);
    s.schedule = make_schedule(cfg);
    s.resolution = cfg.resolution;
    s.domain = DomainSpec{DomainKind::PeriodicTorus, cfg.physics.d, cfg.side};
    s.step.outer_tol = cfg.solver.outer_tol;
    s.step.max_outer = cfg.solver.max_outer;
    s.step.picard.tol = cfg.solver.picard_tol;
    s.step.picard.max_iter = cfg.solver.picard_max_iter;
    s.step.picard.delta0 = cfg.delta;
    s.step.picard.krylov.tol = cfg.solver.krylov_tol;
    s.step.picard.krylov.restart = cfg.solver.krylov_restart;
    s.frozen_velocity = cfg.frozen_velocity;
    s.fingerprint = config_fingerprint(cfg);
    const InitialSpec init = cfg.initial;
    s.initial = [init](const Discretization& disc) {
        return InitialData{make_velocity(disc, init.velocity, init.velocity_amplitude), make_density(disc, init)};
    };
    return s;
}

} // namespace polykinetic
