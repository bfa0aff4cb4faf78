// End-to-end tests that drive the installed CLI binary through std::system.
// VARFRAC_BIN is injected by the build as the path to the executable.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path work_root() {
    static fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "varfrac_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path write_config(const std::string& name, const std::string& json) {
    fs::path p = work_root() / name;
    std::ofstream out(p);
    out << json;
    return p;
}

int run_cli(const fs::path& config, const fs::path& out_dir,
            const std::string& extra = "", const std::string& env_prefix = "") {
    std::string cmd = env_prefix + "\"" + std::string(VARFRAC_BIN) + "\" run \"" +
                      config.string() + "\" --out-dir \"" + out_dir.string() + "\"" +
                      (extra.empty() ? "" : " " + extra) + " 2>" +
                      (work_root() / "stderr.log").string();
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Csv read_csv(const fs::path& p) {
    Csv csv;
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            csv.comments.push_back(line);
            continue;
        }
        if (!have_header) {
            csv.header = split(line, ',');
            have_header = true;
        } else {
            csv.rows.push_back(split(line, ','));
        }
    }
    return csv;
}

// key/value report -> map
std::map<std::string, std::string> report_map(const fs::path& p) {
    Csv csv = read_csv(p);
    REQUIRE(csv.header == std::vector<std::string>{"key", "value"});
    std::map<std::string, std::string> out;
    for (const auto& r : csv.rows) {
        REQUIRE(r.size() == 2);
        out[r[0]] = r[1];
    }
    return out;
}

int column_of(const Csv& csv, const std::string& name) {
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        if (csv.header[i] == name) return static_cast<int>(i);
    return -1;
}

const char* kSolveConfig = R"({
  "task": "solve",
  "domain": {"N": 1, "n_x": 33, "n_y": 33},
  "order": {"kind": "constant", "value": 0.5},
  "rhs": {"name": "sin_mode", "k": 1},
  "compare": "spectral",
  "oracle_modes": 16
})";

} // namespace

TEST_CASE("solve task writes provenance-stamped artifacts and beats the oracle gate") {
    fs::path cfg = write_config("solve.json", kSolveConfig);
    fs::path dir = work_root() / "solve_out";
    CHECK(run_cli(cfg, dir) == 0);

    CHECK(fs::exists(dir / "solution.vtk"));
    CHECK(fs::exists(dir / "trace.csv"));
    CHECK(fs::exists(dir / "report.csv"));

    auto rep = report_map(dir / "report.csv");
    CHECK(rep.at("task") == "solve");
    CHECK(std::stod(rep.at("oracle_rel_l2")) < 0.02);
    CHECK(std::stod(rep.at("cg_residual")) < 1e-9);
    CHECK(std::stod(rep.at("tau")) > 1.0);

    Csv trace = read_csv(dir / "trace.csv");
    REQUIRE(trace.comments.size() >= 2);
    CHECK(trace.comments[0] == "# varfrac artifact_version=1");
    CHECK(trace.comments[1].rfind("# config_hash=0x", 0) == 0);
    CHECK(column_of(trace, "x1") == 0);
    CHECK(column_of(trace, "value") >= 0);
    CHECK(column_of(trace, "oracle") >= 0);
    CHECK(static_cast<int>(trace.rows.size()) == 33); // full base grid incl. boundary

    // both artifacts carry the same config hash
    Csv report = read_csv(dir / "report.csv");
    CHECK(report.comments[1] == trace.comments[1]);

    std::string vtk = read_file(dir / "solution.vtk");
    CHECK(vtk.rfind("# vtk DataFile Version 3.0", 0) == 0);
    CHECK(vtk.find("DATASET STRUCTURED_GRID") != std::string::npos);
    CHECK(vtk.find("SCALARS u double 1") != std::string::npos);
    CHECK(vtk.find("SCALARS order double 1") != std::string::npos);
}

TEST_CASE("identical configs reproduce byte-identical artifacts, threads included") {
    fs::path cfg = write_config("repro.json", kSolveConfig);
    fs::path a = work_root() / "repro_a";
    fs::path b = work_root() / "repro_b";
    fs::path c = work_root() / "repro_c";
    CHECK(run_cli(cfg, a) == 0);
    CHECK(run_cli(cfg, b) == 0);
    CHECK(run_cli(cfg, c, "--threads 3") == 0);
    for (const char* name : {"report.csv", "trace.csv", "solution.vtk"}) {
        CHECK(read_file(a / name) == read_file(b / name));
        CHECK(read_file(a / name) == read_file(c / name));
    }
    // the env fallback steers threading the same way
    fs::path d = work_root() / "repro_d";
    CHECK(run_cli(cfg, d, "", "VARFRAC_THREADS=2 ") == 0);
    CHECK(read_file(a / "report.csv") == read_file(d / "report.csv"));
}

TEST_CASE("config validation failures exit with code 2 and write nothing") {
    fs::path dir = work_root() / "invalid_out";

    SUBCASE("unknown top-level key") {
        fs::path cfg = write_config("bad_key.json", R"({
          "task": "solve", "bogus": 1,
          "order": {"kind": "constant", "value": 0.5},
          "rhs": "sin_mode"
        })");
        CHECK(run_cli(cfg, dir) == 2);
        CHECK_FALSE(fs::exists(dir / "report.csv"));
    }
    SUBCASE("unknown task") {
        fs::path cfg = write_config("bad_task.json", R"({
          "task": "fly", "order": {"kind": "constant", "value": 0.5}
        })");
        CHECK(run_cli(cfg, dir) == 2);
    }
    SUBCASE("step cells with a gap") {
        fs::path cfg = write_config("bad_step.json", R"({
          "task": "solve",
          "order": {"kind": "step", "cells": [
            {"box": [[0.0, 0.4]], "value": 0.3},
            {"box": [[0.5, 1.0]], "value": 0.7}
          ]},
          "rhs": "sin_mode"
        })");
        CHECK(run_cli(cfg, dir) == 2);
    }
    SUBCASE("oracle comparison demands a constant order") {
        fs::path cfg = write_config("bad_oracle.json", R"({
          "task": "oracle_compare",
          "order": {"kind": "step", "cells": [
            {"box": [[0.0, 0.5]], "value": 0.3},
            {"box": [[0.5, 1.0]], "value": 0.7}
          ]},
          "rhs": "sin_mode"
        })");
        CHECK(run_cli(cfg, dir) == 2);
    }
    SUBCASE("rhs and data are mutually exclusive") {
        fs::path cfg = write_config("bad_both.json", R"({
          "task": "solve",
          "order": {"kind": "constant", "value": 0.5},
          "rhs": "sin_mode", "data": "one"
        })");
        CHECK(run_cli(cfg, dir) == 2);
    }
    SUBCASE("classical Hardy suite rejects eps at the threshold") {
        fs::path cfg = write_config("bad_eps.json", R"({
          "task": "inequality_suite",
          "order": {"kind": "constant", "value": 0.5},
          "suite": {"name": "hardy_classical", "samples": 2, "eps": 1.0}
        })");
        CHECK(run_cli(cfg, dir) == 2);
    }
    SUBCASE("improved trace suite is one-dimensional only") {
        fs::path cfg = write_config("bad_improved.json", R"({
          "task": "inequality_suite",
          "domain": {"N": 2, "n_x": 9, "n_y": 9},
          "order": {"kind": "constant", "value": 0.5},
          "suite": {"name": "improved_trace", "samples": 2}
        })");
        CHECK(run_cli(cfg, dir) == 2);
    }
    SUBCASE("nonexistent config file") {
        CHECK(run_cli(work_root() / "no_such.json", dir) == 2);
    }
}

TEST_CASE("a starved iteration budget exits with code 3") {
    fs::path cfg = write_config("starved.json", R"({
      "task": "solve",
      "domain": {"N": 1, "n_x": 33, "n_y": 33},
      "order": {"kind": "constant", "value": 0.5},
      "rhs": "sin_mode",
      "solver": {"cg_max_iter": 1}
    })");
    CHECK(run_cli(cfg, work_root() / "starved_out") == 3);
}

TEST_CASE("inequality suites report holds and exit 0 when every row passes") {
    fs::path cfg = write_config("hardy.json", R"({
      "task": "inequality_suite",
      "order": {"kind": "constant", "value": 0.5},
      "seed": 42,
      "suite": {"name": "hardy_classical", "samples": 10}
    })");
    fs::path dir = work_root() / "hardy_out";
    CHECK(run_cli(cfg, dir) == 0);
    Csv csv = read_csv(dir / "report.csv");
    CHECK(csv.header == std::vector<std::string>{"id", "lhs", "rhs", "margin", "holds"});
    REQUIRE(csv.rows.size() == 11); // the hat row + 10 samples
    CHECK(csv.rows[0][0] == "hat");
    for (const auto& r : csv.rows) {
        CHECK(r[4] == "true");
        CHECK(std::stod(r[3]) > 0.0);
    }
}

TEST_CASE("an out-of-hypothesis trace aperture is reported as a violation, exit 4") {
    // sigma far beyond the admissible (0, min(1, tau)] range shrinks the
    // right side until honest samples break the inequality
    fs::path cfg = write_config("violate.json", R"({
      "task": "inequality_suite",
      "domain": {"N": 1, "n_x": 17, "n_y": 17},
      "order": {"kind": "constant", "value": 0.5},
      "seed": 7,
      "suite": {"name": "trace", "samples": 3, "sigma": 400.0}
    })");
    fs::path dir = work_root() / "violate_out";
    CHECK(run_cli(cfg, dir) == 4);
    Csv csv = read_csv(dir / "report.csv");
    bool any_violation = false;
    for (const auto& r : csv.rows) any_violation |= (r[4] == "false");
    CHECK(any_violation);
}

TEST_CASE("trace suite within the hypothesis holds on every sample") {
    fs::path cfg = write_config("trace_ok.json", R"({
      "task": "inequality_suite",
      "domain": {"N": 1, "n_x": 17, "n_y": 17},
      "order": {"kind": "constant", "value": 0.5},
      "seed": 7,
      "suite": {"name": "trace", "samples": 5, "sigma": 0.5}
    })");
    fs::path dir = work_root() / "trace_ok_out";
    CHECK(run_cli(cfg, dir) == 0);
    Csv csv = read_csv(dir / "report.csv");
    REQUIRE(csv.rows.size() == 5);
    for (const auto& r : csv.rows) CHECK(r[4] == "true");
}

TEST_CASE("apply task writes trace and report but no field file") {
    fs::path cfg = write_config("apply.json", R"({
      "task": "apply",
      "domain": {"N": 1, "n_x": 33, "n_y": 33},
      "order": {"kind": "constant", "value": 0.5},
      "rhs": {"name": "sin_mode", "k": 1},
      "compare": "spectral",
      "oracle_modes": 16
    })");
    fs::path dir = work_root() / "apply_out";
    CHECK(run_cli(cfg, dir) == 0);
    CHECK_FALSE(fs::exists(dir / "solution.vtk"));
    Csv trace = read_csv(dir / "trace.csv");
    CHECK(column_of(trace, "input") >= 0);
    CHECK(column_of(trace, "result") >= 0);
    CHECK(column_of(trace, "oracle") >= 0);
    auto rep = report_map(dir / "report.csv");
    CHECK(std::stod(rep.at("oracle_rel_l2")) < 0.05);
}

TEST_CASE("extend task accepts custom nodal data from a csv file") {
    // nodal values over the full base grid (17 nodes, boundary included)
    fs::path data = work_root() / "trace_data.csv";
    {
        std::ofstream out(data);
        out << "# hand-made base trace\n";
        for (int i = 0; i < 17; ++i) {
            double x = i / 16.0;
            out << x * (1.0 - x) << "\n";
        }
    }
    std::string cfg_text = std::string(R"({
      "task": "extend",
      "domain": {"N": 1, "n_x": 17, "n_y": 17},
      "order": {"kind": "constant", "value": 0.4},
      "data": {"name": "custom", "path": ")") +
                           data.string() + R"("}
    })";
    fs::path cfg = write_config("extend.json", cfg_text);
    fs::path dir = work_root() / "extend_out";
    CHECK(run_cli(cfg, dir) == 0);
    auto rep = report_map(dir / "report.csv");
    CHECK(std::stod(rep.at("energy")) > 0.0);
    CHECK(std::stod(rep.at("base_violation")) < 1e-10);
    CHECK(fs::exists(dir / "solution.vtk"));

    SUBCASE("a wrong node count is a config error") {
        fs::path bad = work_root() / "short_data.csv";
        {
            std::ofstream out(bad);
            out << "0.0\n0.5\n0.0\n";
        }
        std::string bad_cfg = std::string(R"({
          "task": "extend",
          "domain": {"N": 1, "n_x": 17, "n_y": 17},
          "order": {"kind": "constant", "value": 0.4},
          "data": {"name": "custom", "path": ")") +
                              bad.string() + R"("}
        })";
        CHECK(run_cli(write_config("extend_bad.json", bad_cfg),
                      work_root() / "extend_bad_out") == 2);
    }
}

TEST_CASE("penalty study reports a monotone violation ladder") {
    fs::path cfg = write_config("penalty.json", R"({
      "task": "penalty_study",
      "domain": {"N": 1, "n_x": 17, "n_y": 17},
      "order": {"kind": "constant", "value": 0.5},
      "rhs": {"name": "sin_mode", "k": 1},
      "penalty": {"mu_values": [100.0, 1000.0, 10000.0]}
    })");
    fs::path dir = work_root() / "penalty_out";
    CHECK(run_cli(cfg, dir) == 0);
    Csv csv = read_csv(dir / "report.csv");
    REQUIRE(csv.rows.size() == 3);
    int c_viol = column_of(csv, "base_violation");
    int c_gap = column_of(csv, "rel_energy_gap");
    REQUIRE(c_viol >= 0);
    REQUIRE(c_gap >= 0);
    double prev = 1e300;
    for (const auto& r : csv.rows) {
        double v = std::stod(r[c_viol]);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(std::stod(csv.rows.back()[c_gap]) < 1e-2);
}

TEST_CASE("convergence study shows decreasing error against the mode oracle") {
    fs::path cfg = write_config("conv.json", R"({
      "task": "convergence_study",
      "order": {"kind": "constant", "value": 0.5},
      "rhs": {"name": "sin_mode", "k": 1},
      "compare": "spectral",
      "oracle_modes": 8,
      "ladder": {"n_x": [9, 17, 33]}
    })");
    fs::path dir = work_root() / "conv_out";
    CHECK(run_cli(cfg, dir) == 0);
    Csv csv = read_csv(dir / "report.csv");
    REQUIRE(csv.rows.size() == 3);
    int c_err = column_of(csv, "error");
    int c_rate = column_of(csv, "rate");
    REQUIRE(c_err >= 0);
    REQUIRE(c_rate >= 0);
    CHECK(std::stod(csv.rows[1][c_err]) < std::stod(csv.rows[0][c_err]));
    CHECK(std::stod(csv.rows[2][c_err]) < std::stod(csv.rows[1][c_err]));
    CHECK(std::stod(csv.rows[2][c_rate]) > 1.0);
}

TEST_CASE("self-referencing convergence study works for variable orders") {
    fs::path cfg = write_config("conv_self.json", R"({
      "task": "convergence_study",
      "order": {"kind": "step", "cells": [
        {"box": [[0.0, 0.5]], "value": 0.3},
        {"box": [[0.5, 1.0]], "value": 0.7}
      ]},
      "rhs": {"name": "sin_mode", "k": 1},
      "compare": "finest",
      "ladder": {"n_x": [9, 17, 33]}
    })");
    fs::path dir = work_root() / "conv_self_out";
    CHECK(run_cli(cfg, dir) == 0);
    Csv csv = read_csv(dir / "report.csv");
    REQUIRE(csv.rows.size() >= 2); // the finest rung is the reference
    int c_err = column_of(csv, "error");
    CHECK(std::stod(csv.rows[1][c_err]) < std::stod(csv.rows[0][c_err]));
}

TEST_CASE("poincare task reports the discrete constant for a mesh ladder") {
    fs::path cfg = write_config("poincare.json", R"({
      "task": "poincare",
      "domain": {"N": 1, "n_x": 17, "n_y": 17, "tau": 1.0},
      "order": {"kind": "constant", "value": 0.5},
      "ladder": {"n_x": [9, 17, 25]}
    })");
    fs::path dir = work_root() / "poincare_out";
    CHECK(run_cli(cfg, dir) == 0);
    Csv csv = read_csv(dir / "report.csv");
    REQUIRE(csv.rows.size() == 3);
    int c_cp = column_of(csv, "poincare_constant");
    REQUIRE(c_cp >= 0);
    double c0 = std::stod(csv.rows[0][c_cp]);
    double c2 = std::stod(csv.rows[2][c_cp]);
    CHECK(c0 > 0.0);
    CHECK(std::abs(c2 - c0) / c2 < 0.2);
}
