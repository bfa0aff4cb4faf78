#include "varfrac_cli/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

using nlohmann::json;

namespace varfrac_cli {

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) fail(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
    }
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail("missing key '" + key + "' in " + where);
    if (!j[key].is_number()) fail("'" + key + "' in " + where + " must be a number");
    return j[key].get<double>();
}

int require_int(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail("missing key '" + key + "' in " + where);
    if (!j[key].is_number_integer()) fail("'" + key + "' in " + where + " must be an integer");
    return j[key].get<int>();
}

double optional_number(const json& j, const std::string& key, double fallback,
                       const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail("'" + key + "' in " + where + " must be a number");
    return j[key].get<double>();
}

int optional_int(const json& j, const std::string& key, int fallback,
                 const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) fail("'" + key + "' in " + where + " must be an integer");
    return j[key].get<int>();
}

std::string optional_string(const json& j, const std::string& key, const std::string& fallback,
                            const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) fail("'" + key + "' in " + where + " must be a string");
    return j[key].get<std::string>();
}

/// Accepts a number, or the string "auto" mapped to -1.
double number_or_auto(const json& j, const std::string& key, double fallback,
                      const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (j[key].is_string()) {
        if (j[key].get<std::string>() == "auto") return -1.0;
        fail("'" + key + "' in " + where + " must be a number or \"auto\"");
    }
    if (!j[key].is_number()) fail("'" + key + "' in " + where + " must be a number or \"auto\"");
    return j[key].get<double>();
}

varfrac::Point parse_point(const json& j, int N, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != N) {
        fail(where + " must be an array of " + std::to_string(N) + " coordinates");
    }
    varfrac::Point p{0.0, 0.0};
    for (int i = 0; i < N; ++i) {
        if (!j[i].is_number()) fail(where + " coordinates must be numbers");
        p[i] = j[i].get<double>();
    }
    return p;
}

varfrac::OrderField parse_order(const json& j, int N) {
    check_keys(j, {"kind", "value", "cells", "sigma", "eps", "anchors", "s_min", "s_max"},
               "order");
    std::string kind = optional_string(j, "kind", "", "order");
    if (kind.empty()) fail("missing key 'kind' in order");
    varfrac::OrderField field = varfrac::OrderField::constant(N, 0.5);
    try {
        if (kind == "constant") {
            field = varfrac::OrderField::constant(N, require_number(j, "value", "order"));
        } else if (kind == "step") {
            if (!j.contains("cells") || !j["cells"].is_array() || j["cells"].empty()) {
                fail("step order needs a non-empty 'cells' array");
            }
            std::vector<varfrac::StepCell> cells;
            for (const auto& cj : j["cells"]) {
                check_keys(cj, {"box", "value"}, "order.cells[]");
                varfrac::StepCell cell;
                cell.value = require_number(cj, "value", "order.cells[]");
                if (!cj.contains("box") || !cj["box"].is_array() ||
                    static_cast<int>(cj["box"].size()) != N) {
                    fail("step cell 'box' must be an array of " + std::to_string(N) +
                         " [lo, hi] pairs");
                }
                for (int ax = 0; ax < N; ++ax) {
                    const auto& range = cj["box"][ax];
                    if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
                        !range[1].is_number()) {
                        fail("step cell 'box' entries must be [lo, hi] number pairs");
                    }
                    cell.box[ax] = {range[0].get<double>(), range[1].get<double>()};
                }
                cells.push_back(cell);
            }
            field = varfrac::OrderField::step(N, std::move(cells));
        } else if (kind == "distance_based") {
            double sigma = require_number(j, "sigma", "order");
            double eps = require_number(j, "eps", "order");
            if (!j.contains("anchors") || !j["anchors"].is_array() || j["anchors"].empty()) {
                fail("distance_based order needs a non-empty 'anchors' array");
            }
            std::vector<varfrac::Point> anchors;
            for (const auto& aj : j["anchors"]) {
                anchors.push_back(parse_point(aj, N, "order.anchors[]"));
            }
            field = varfrac::OrderField::distance_based(N, sigma, eps, std::move(anchors));
        } else {
            fail("order kind '" + kind + "' is not one of constant/step/distance_based");
        }
        if (j.contains("s_min") || j.contains("s_max")) {
            double lo = optional_number(j, "s_min", field.s_min(), "order");
            double hi = optional_number(j, "s_max", field.s_max(), "order");
            field.set_clamp(lo, hi);
        }
    } catch (const std::invalid_argument& e) {
        fail(std::string("order rejected: ") + e.what());
    }
    return field;
}

FunctionSpec parse_function(const json& j, const std::string& where) {
    FunctionSpec f;
    if (j.is_string()) {
        f.name = j.get<std::string>();
    } else {
        check_keys(j, {"name", "k", "path"}, where);
        f.name = optional_string(j, "name", "", where);
        f.k = optional_int(j, "k", 1, where);
        f.path = optional_string(j, "path", "", where);
    }
    static const std::set<std::string> names{"zero", "one", "sin_mode", "bump", "custom"};
    if (!names.count(f.name)) {
        fail("'" + where + "' names an unknown function '" + f.name + "'");
    }
    if (f.k < 1) fail("'" + where + "' mode index k must be >= 1");
    if (f.name == "custom" && f.path.empty()) fail("custom " + where + " needs 'path'");
    return f;
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    check_keys(root,
               {"task", "domain", "order", "g_variant", "p", "rhs", "data", "solver", "output",
                "seed", "compare", "oracle_modes", "suite", "penalty", "ladder"},
               "config");

    RunConfig cfg;
    cfg.config_hash = fnv1a64(root.dump());

    static const std::set<std::string> tasks{"solve",          "apply",
                                             "extend",         "penalty_study",
                                             "oracle_compare", "poincare",
                                             "inequality_suite", "convergence_study"};
    cfg.task = optional_string(root, "task", "", "config");
    if (cfg.task.empty()) fail("missing required key 'task'");
    if (!tasks.count(cfg.task)) fail("unknown task '" + cfg.task + "'");

    // Tasks that never touch a mesh (the Hardy suites) and ladder-driven tasks
    // work off the defaults, so the block is optional.
    if (root.contains("domain")) {
        const json& d = root["domain"];
        check_keys(d, {"N", "n_x", "n_y", "tau", "gamma", "decay_tol"}, "domain");
        cfg.domain.N = require_int(d, "N", "domain");
        if (cfg.domain.N != 1 && cfg.domain.N != 2) fail("domain.N must be 1 or 2");
        cfg.domain.n_x = optional_int(d, "n_x", 64, "domain");
        cfg.domain.n_y = optional_int(d, "n_y", 64, "domain");
        if (cfg.domain.n_x < 3) fail("domain.n_x must be at least 3");
        if (cfg.domain.n_y < 2) fail("domain.n_y must be at least 2");
        cfg.domain.tau = number_or_auto(d, "tau", -1.0, "domain");
        if (cfg.domain.tau != -1.0 && cfg.domain.tau <= 0.0) fail("domain.tau must be positive");
        cfg.domain.gamma = number_or_auto(d, "gamma", -1.0, "domain");
        if (cfg.domain.gamma != -1.0 && cfg.domain.gamma < 1.0) {
            fail("domain.gamma must be >= 1");
        }
        cfg.domain.decay_tol = optional_number(d, "decay_tol", 1e-8, "domain");
        if (cfg.domain.decay_tol <= 0.0 || cfg.domain.decay_tol >= 1.0) {
            fail("domain.decay_tol must lie in (0,1)");
        }
    }

    if (!root.contains("order")) fail("missing required key 'order'");
    cfg.order = parse_order(root["order"], cfg.domain.N);
    if (cfg.task == "oracle_compare" && cfg.order.kind() != varfrac::OrderKind::Constant) {
        fail("task=oracle_compare requires a constant order field (the spectral reference "
             "exists only there)");
    }

    std::string gv = optional_string(root, "g_variant", "pointwise", "config");
    if (gv == "pointwise") {
        cfg.g_variant = varfrac::GsVariant::Pointwise;
    } else if (gv == "mean_constant") {
        cfg.g_variant = varfrac::GsVariant::MeanConstant;
    } else if (gv == "unit") {
        cfg.g_variant = varfrac::GsVariant::Unit;
    } else {
        fail("g_variant must be pointwise, mean_constant, or unit");
    }

    cfg.p = optional_number(root, "p", 2.0, "config");
    if (cfg.p < 2.0) fail("p must be >= 2");

    if (root.contains("rhs") && root.contains("data")) {
        fail("give either 'rhs' or 'data', not both (they name the same input function)");
    }
    if (root.contains("rhs")) cfg.rhs = parse_function(root["rhs"], "rhs");
    if (root.contains("data")) cfg.rhs = parse_function(root["data"], "data");

    if (root.contains("solver")) {
        const json& s = root["solver"];
        check_keys(s, {"cg_tol", "cg_max_iter", "eig_tol", "eig_max_iter"}, "solver");
        cfg.solver.cg_tol = optional_number(s, "cg_tol", 1e-10, "solver");
        cfg.solver.cg_max_iter = optional_int(s, "cg_max_iter", 0, "solver");
        cfg.solver.eig_tol = optional_number(s, "eig_tol", 1e-9, "solver");
        cfg.solver.eig_max_iter = optional_int(s, "eig_max_iter", 400, "solver");
        if (cfg.solver.cg_tol <= 0 || cfg.solver.eig_tol <= 0) {
            fail("solver tolerances must be positive");
        }
        if (cfg.solver.cg_max_iter < 0 || cfg.solver.eig_max_iter <= 0) {
            fail("solver iteration limits must be positive (cg_max_iter 0 = auto)");
        }
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        check_keys(o, {"solution_vtk", "trace_csv", "report_csv"}, "output");
        cfg.output.solution_vtk =
            optional_string(o, "solution_vtk", cfg.output.solution_vtk, "output");
        cfg.output.trace_csv = optional_string(o, "trace_csv", cfg.output.trace_csv, "output");
        cfg.output.report_csv = optional_string(o, "report_csv", cfg.output.report_csv, "output");
    }

    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer()) fail("seed must be an integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }

    cfg.compare = optional_string(root, "compare", "", "config");
    if (!cfg.compare.empty() && cfg.compare != "spectral" && cfg.compare != "finest") {
        fail("compare must be 'spectral' or 'finest'");
    }
    if (cfg.compare == "spectral" && cfg.order.kind() != varfrac::OrderKind::Constant) {
        fail("compare=spectral requires a constant order field");
    }

    cfg.oracle_modes = optional_int(root, "oracle_modes", 32, "config");
    if (cfg.oracle_modes < 1) fail("oracle_modes must be >= 1");

    if (cfg.task == "inequality_suite") {
        if (!root.contains("suite")) fail("task=inequality_suite needs a 'suite' block");
        const json& s = root["suite"];
        check_keys(s, {"name", "samples", "sigma", "quad_level", "eps"}, "suite");
        cfg.suite.name = optional_string(s, "name", "", "suite");
        static const std::set<std::string> suites{"trace", "improved_trace", "hardy_weighted",
                                                  "hardy_classical"};
        if (!suites.count(cfg.suite.name)) {
            fail("suite.name must be one of trace/improved_trace/hardy_weighted/hardy_classical");
        }
        cfg.suite.samples = optional_int(s, "samples", 200, "suite");
        if (cfg.suite.samples < 1) fail("suite.samples must be >= 1");
        cfg.suite.sigma = optional_number(s, "sigma", 0.5, "suite");
        if (cfg.suite.sigma <= 0) fail("suite.sigma must be positive");
        cfg.suite.quad_level = optional_int(s, "quad_level", 14, "suite");
        if (cfg.suite.quad_level < 4 || cfg.suite.quad_level > 40) {
            fail("suite.quad_level must lie in [4, 40]");
        }
        cfg.suite.eps = optional_number(s, "eps", 2.0, "suite");
        if (cfg.suite.name == "hardy_classical" && !(cfg.suite.eps > cfg.p - 1.0)) {
            fail("suite.eps must exceed p-1 for hardy_classical");
        }
        if (cfg.suite.name == "improved_trace" && cfg.domain.N != 1) {
            fail("suite improved_trace runs on N=1 only");
        }
    } else if (root.contains("suite")) {
        fail("'suite' is only valid for task=inequality_suite");
    }

    if (root.contains("penalty")) {
        if (cfg.task != "penalty_study") fail("'penalty' is only valid for task=penalty_study");
        const json& pj = root["penalty"];
        check_keys(pj, {"mu_values"}, "penalty");
        if (!pj.contains("mu_values") || !pj["mu_values"].is_array() ||
            pj["mu_values"].empty()) {
            fail("penalty.mu_values must be a non-empty array");
        }
        cfg.penalty.mu_values.clear();
        for (const auto& m : pj["mu_values"]) {
            if (!m.is_number()) fail("penalty.mu_values entries must be numbers");
            cfg.penalty.mu_values.push_back(m.get<double>());
        }
        for (std::size_t i = 0; i < cfg.penalty.mu_values.size(); ++i) {
            if (cfg.penalty.mu_values[i] <= 0.0) fail("penalty.mu_values must be positive");
            if (i > 0 && cfg.penalty.mu_values[i] <= cfg.penalty.mu_values[i - 1]) {
                fail("penalty.mu_values must be strictly increasing");
            }
        }
    }

    if (root.contains("ladder")) {
        if (cfg.task != "convergence_study" && cfg.task != "poincare") {
            fail("'ladder' is only valid for convergence_study or poincare");
        }
        const json& lj = root["ladder"];
        check_keys(lj, {"n_x"}, "ladder");
        if (!lj.contains("n_x") || !lj["n_x"].is_array() || lj["n_x"].empty()) {
            fail("ladder.n_x must be a non-empty array of node counts");
        }
        cfg.ladder.n_x.clear();
        for (const auto& n : lj["n_x"]) {
            if (!n.is_number_integer()) fail("ladder.n_x entries must be integers");
            cfg.ladder.n_x.push_back(n.get<int>());
        }
        for (std::size_t i = 0; i < cfg.ladder.n_x.size(); ++i) {
            if (cfg.ladder.n_x[i] < 3) fail("ladder.n_x entries must be >= 3");
            if (i > 0 && cfg.ladder.n_x[i] <= cfg.ladder.n_x[i - 1]) {
                fail("ladder.n_x must be strictly increasing");
            }
        }
    }
    if (cfg.task == "convergence_study" && cfg.ladder.n_x.empty()) {
        fail("task=convergence_study needs a 'ladder' block");
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace varfrac_cli
