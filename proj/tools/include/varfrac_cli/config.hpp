#pragma once

#include <varfrac/order_field.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace varfrac_cli {

/// Raised for any schema problem; the CLI maps it to exit code 2 before any
/// output file is created.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainConfig {
    int N = 1;
    int n_x = 64;
    int n_y = 64;
    double tau = -1.0;   ///< -1 means "auto"
    double gamma = -1.0; ///< -1 means "auto"
    double decay_tol = 1e-8;
};

struct SolverConfig {
    double cg_tol = 1e-10;
    int cg_max_iter = 0; ///< 0 = scale with problem size
    double eig_tol = 1e-9;
    int eig_max_iter = 400;
};

struct OutputConfig {
    std::string solution_vtk = "solution.vtk";
    std::string trace_csv = "trace.csv";
    std::string report_csv = "report.csv";
};

/// Named analytic base function, or nodal values from a CSV file.
struct FunctionSpec {
    std::string name = "zero"; ///< zero | one | sin_mode | bump | custom
    int k = 1;                 ///< mode index for sin_mode
    std::string path;          ///< nodal CSV for custom
};

struct SuiteConfig {
    std::string name; ///< trace | improved_trace | hardy_weighted | hardy_classical
    int samples = 200;
    double sigma = 0.5;
    int quad_level = 14;
    double eps = 2.0; ///< weight exponent for hardy_classical
};

struct PenaltyConfig {
    std::vector<double> mu_values{1e2, 1e3, 1e4, 1e5, 1e6};
};

struct LadderConfig {
    std::vector<int> n_x; ///< node counts; n_y follows n_x per rung
};

struct RunConfig {
    std::string task;
    DomainConfig domain;
    varfrac::OrderField order = varfrac::OrderField::constant(1, 0.5);
    varfrac::GsVariant g_variant = varfrac::GsVariant::Pointwise;
    double p = 2.0;
    FunctionSpec rhs;
    SolverConfig solver;
    OutputConfig output;
    std::uint64_t seed = 0;
    std::string compare; ///< "" | "spectral" | "finest"
    int oracle_modes = 32;
    SuiteConfig suite;
    PenaltyConfig penalty;
    LadderConfig ladder;

    std::uint64_t config_hash = 0; ///< FNV-1a of the canonical JSON dump
};

/// Parses and validates a config file; throws ConfigError on any problem.
RunConfig load_config(const std::string& path);
/// Same from an in-memory JSON string (used by the tests).
RunConfig parse_config(const std::string& json_text);

std::uint64_t fnv1a64(std::string_view text);

} // namespace varfrac_cli
