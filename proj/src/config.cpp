#include "chsplit/config.hpp"

#include "chsplit/errors.hpp"
#include "chsplit/expression.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace chsplit {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why)
{
    throw ConfigError(field + ": " + why);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys)
{
    if (!obj.is_object()) {
        bad(where.empty() ? "<root>" : where, "expected an object");
    }
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            bad(where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

const json& require(const json& obj, const std::string& where, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        bad(where.empty() ? key : where + "." + key, "missing required key");
    }
    return *it;
}

const json* optional(const json& obj, const char* key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

// Numbers may also be written as constant expressions such as "0.01*sqrt(2)".
double get_real(const json& v, const std::string& field)
{
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        try {
            return Expression(v.get<std::string>())(0.0, 0.0);
        } catch (const ConfigError& e) {
            bad(field, e.what());
        }
    }
    bad(field, "expected a number");
}

long long get_int(const json& v, const std::string& field)
{
    if (!v.is_number_integer()) {
        bad(field, "expected an integer");
    }
    return v.get<long long>();
}

std::string get_string(const json& v, const std::string& field)
{
    if (!v.is_string()) {
        bad(field, "expected a string");
    }
    return v.get<std::string>();
}

double positive(double x, const std::string& field)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        bad(field, "must be a positive finite number");
    }
    return x;
}

int even_size(long long n, const std::string& field)
{
    if (n < 2 || n % 2 != 0 || n > 4096) {
        bad(field, "must be an even integer in [2, 4096], got " + std::to_string(n));
    }
    return static_cast<int>(n);
}

} // namespace

const char* to_string(InitPhiMode mode) noexcept { return mode == InitPhiMode::Ritz ? "ritz" : "interp"; }

const char* to_string(InitMuMode mode) noexcept
{
    return mode == InitMuMode::RitzAnalytic ? "ritz_analytic" : "discrete_variational";
}

RunConfig parse_config(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    allow_keys(root, "", {"format_version", "mode", "mesh", "element", "physics", "time", "initial_condition",
                          "init", "solver", "output", "threads", "seed"});
    RunConfig cfg;

    if (get_int(require(root, "", "format_version"), "format_version") != config_format_version) {
        bad("format_version", "unsupported version (expected " + std::to_string(config_format_version) + ")");
    }
    const std::string mode = get_string(require(root, "", "mode"), "mode");
    if (mode == "simulate") {
        cfg.mode = RunMode::Simulate;
    } else if (mode == "cauchy") {
        cfg.mode = RunMode::Cauchy;
    } else {
        bad("mode", "expected \"simulate\" or \"cauchy\", got \"" + mode + "\"");
    }
    const bool simulate = cfg.mode == RunMode::Simulate;

    const json& mesh = require(root, "", "mesh");
    if (simulate) {
        allow_keys(mesh, "mesh", {"n"});
        cfg.n = even_size(get_int(require(mesh, "mesh", "n"), "mesh.n"), "mesh.n");
    } else {
        allow_keys(mesh, "mesh", {"levels"});
        const json& levels = require(mesh, "mesh", "levels");
        if (!levels.is_array() || levels.size() < 2) {
            bad("mesh.levels", "expected an array of at least two sizes");
        }
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const std::string f = "mesh.levels[" + std::to_string(k) + "]";
            cfg.levels.push_back(even_size(get_int(levels[k], f), f));
            if (k > 0 && cfg.levels[k] != 2 * cfg.levels[k - 1]) {
                bad(f, "each level must be twice the previous one");
            }
        }
    }

    const json& element = require(root, "", "element");
    allow_keys(element, "element", {"degree"});
    const long long degree = get_int(require(element, "element", "degree"), "element.degree");
    if (degree != 1 && degree != 2) {
        bad("element.degree", "must be 1 or 2");
    }
    cfg.degree = static_cast<int>(degree);

    const json& physics = require(root, "", "physics");
    allow_keys(physics, "physics", {"epsilon", "final_time"});
    cfg.epsilon = positive(get_real(require(physics, "physics", "epsilon"), "physics.epsilon"), "physics.epsilon");
    cfg.final_time =
        positive(get_real(require(physics, "physics", "final_time"), "physics.final_time"), "physics.final_time");

    const json& time = require(root, "", "time");
    if (simulate) {
        allow_keys(time, "time", {"tau"});
        cfg.tau = positive(get_real(require(time, "time", "tau"), "time.tau"), "time.tau");
    } else {
        allow_keys(time, "time", {"kappa"});
        cfg.kappa = positive(get_real(require(time, "time", "kappa"), "time.kappa"), "time.kappa");
    }

    const json& ic = require(root, "", "initial_condition");
    allow_keys(ic, "initial_condition", {"type", "value"});
    cfg.initial_condition.type = get_string(require(ic, "initial_condition", "type"), "initial_condition.type");
    if (cfg.initial_condition.type == "paper") {
        if (optional(ic, "value")) {
            bad("initial_condition.value", "not used by type \"paper\"");
        }
    } else if (cfg.initial_condition.type == "constant") {
        cfg.initial_condition.constant =
            get_real(require(ic, "initial_condition", "value"), "initial_condition.value");
    } else if (cfg.initial_condition.type == "expression") {
        cfg.initial_condition.expression =
            get_string(require(ic, "initial_condition", "value"), "initial_condition.value");
        try {
            Expression check(cfg.initial_condition.expression);
        } catch (const ConfigError& e) {
            bad("initial_condition.value", e.what());
        }
    } else {
        bad("initial_condition.type", "expected \"paper\", \"constant\" or \"expression\"");
    }

    if (const json* init = optional(root, "init")) {
        allow_keys(*init, "init", {"phi", "mu"});
        if (const json* v = optional(*init, "phi")) {
            const std::string s = get_string(*v, "init.phi");
            if (s == "interp") {
                cfg.init_phi = InitPhiMode::Interp;
            } else if (s == "ritz") {
                cfg.init_phi = InitPhiMode::Ritz;
            } else {
                bad("init.phi", "expected \"interp\" or \"ritz\"");
            }
        }
        if (const json* v = optional(*init, "mu")) {
            const std::string s = get_string(*v, "init.mu");
            if (s == "discrete_variational") {
                cfg.init_mu = InitMuMode::DiscreteVariational;
            } else if (s == "ritz_analytic") {
                cfg.init_mu = InitMuMode::RitzAnalytic;
            } else {
                bad("init.mu", "expected \"discrete_variational\" or \"ritz_analytic\"");
            }
        }
    }

    if (const json* solver = optional(root, "solver")) {
        allow_keys(*solver, "solver", {"abs_tol", "rel_tol", "max_iter", "max_halvings"});
        if (const json* v = optional(*solver, "abs_tol")) {
            cfg.newton.abs_tol = positive(get_real(*v, "solver.abs_tol"), "solver.abs_tol");
        }
        if (const json* v = optional(*solver, "rel_tol")) {
            cfg.newton.rel_tol = positive(get_real(*v, "solver.rel_tol"), "solver.rel_tol");
        }
        if (const json* v = optional(*solver, "max_iter")) {
            const long long k = get_int(*v, "solver.max_iter");
            if (k < 1 || k > 1000) {
                bad("solver.max_iter", "must be in [1, 1000]");
            }
            cfg.newton.max_iter = static_cast<int>(k);
        }
        if (const json* v = optional(*solver, "max_halvings")) {
            const long long k = get_int(*v, "solver.max_halvings");
            if (k < 0 || k > 60) {
                bad("solver.max_halvings", "must be in [0, 60]");
            }
            cfg.newton.max_halvings = static_cast<int>(k);
        }
    }

    const json& output = require(root, "", "output");
    allow_keys(output, "output", {"directory", "snapshot_stride"});
    cfg.output_directory = get_string(require(output, "output", "directory"), "output.directory");
    if (cfg.output_directory.empty()) {
        bad("output.directory", "must not be empty");
    }
    if (const json* v = optional(output, "snapshot_stride")) {
        const long long s = get_int(*v, "output.snapshot_stride");
        if (s < 0) {
            bad("output.snapshot_stride", "must be >= 0");
        }
        cfg.snapshot_stride = static_cast<int>(s);
    }

    if (const json* v = optional(root, "threads")) {
        const long long t = get_int(*v, "threads");
        if (t < 1 || t > 256) {
            bad("threads", "must be in [1, 256]");
        }
        cfg.threads = static_cast<unsigned>(t);
    }
    if (const json* v = optional(root, "seed")) {
        cfg.seed = get_int(*v, "seed");
    }

    // Step-count compatibility is part of validation, before any compute.
    try {
        if (simulate) {
            cfg.scheme_params().num_steps();
        } else {
            cfg.convergence_config().validate();
        }
    } catch (const InvalidArgument& e) {
        bad(simulate ? "time.tau" : "time.kappa", e.what());
    }
    cfg.canonical = root.dump(2);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SchemeParams RunConfig::scheme_params() const
{
    SchemeParams p;
    p.epsilon = epsilon;
    p.tau = tau;
    p.final_time = final_time;
    p.degree = degree;
    p.newton = newton;
    p.init_phi = init_phi;
    p.init_mu = init_mu;
    return p;
}

ConvergenceConfig RunConfig::convergence_config() const
{
    ConvergenceConfig c;
    c.levels = levels;
    c.kappa = kappa;
    c.final_time = final_time;
    c.epsilon = epsilon;
    c.degree = degree;
    c.initial_condition = make_initial_condition();
    c.newton = newton;
    c.init_phi = init_phi;
    c.init_mu = init_mu;
    c.threads = threads;
    return c;
}

InitialCondition RunConfig::make_initial_condition() const
{
    if (initial_condition.type == "paper") {
        return paper_initial_condition();
    }
    if (initial_condition.type == "constant") {
        return constant_initial_condition(initial_condition.constant);
    }
    return expression_initial_condition(initial_condition.expression);
}

} // namespace chsplit
