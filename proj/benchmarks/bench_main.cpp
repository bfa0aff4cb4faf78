// Microbenchmarks for the hot paths: assembly, the preconditioned CG solve,
// the single-mode flux recursion, and the singular seminorm quadrature.

#include <benchmark/benchmark.h>

#include <varfrac/assembly.hpp>
#include <varfrac/cylinder_mesh.hpp>
#include <varfrac/extension_solver.hpp>
#include <varfrac/functionals.hpp>
#include <varfrac/order_field.hpp>
#include <varfrac/spectral_oracle.hpp>

#include <cmath>
#include <vector>

namespace {

const double kPi = std::acos(-1.0);

varfrac::OrderField step_field(int dim) {
    std::vector<varfrac::StepCell> cells(2);
    cells[0].box[0] = {0.0, 0.5};
    cells[0].value = 0.3;
    cells[1].box[0] = {0.5, 1.0};
    cells[1].value = 0.7;
    if (dim == 2) {
        cells[0].box[1] = {0.0, 1.0};
        cells[1].box[1] = {0.0, 1.0};
    }
    return varfrac::OrderField::step(dim, std::move(cells));
}

void bm_assemble_1d(benchmark::State& state) {
    varfrac::OrderField order = step_field(1);
    varfrac::CylinderMesh mesh(1, static_cast<int>(state.range(0)),
                               static_cast<int>(state.range(0)), 4.0,
                               varfrac::default_gamma(order));
    varfrac::WeightSpec spec(order, varfrac::GsVariant::Pointwise, 2.0);
    for (auto _ : state) {
        varfrac::ExtensionSystem sys = varfrac::assemble(mesh, spec);
        benchmark::DoNotOptimize(sys.A.rows());
    }
}
BENCHMARK(bm_assemble_1d)->Arg(33)->Arg(65)->Arg(129);

void bm_assemble_2d(benchmark::State& state) {
    varfrac::OrderField order = step_field(2);
    varfrac::CylinderMesh mesh(2, static_cast<int>(state.range(0)), 17, 4.0,
                               varfrac::default_gamma(order));
    varfrac::WeightSpec spec(order, varfrac::GsVariant::Pointwise, 2.0);
    for (auto _ : state) {
        varfrac::ExtensionSystem sys = varfrac::assemble(mesh, spec, 2);
        benchmark::DoNotOptimize(sys.A.rows());
    }
}
BENCHMARK(bm_assemble_2d)->Arg(17)->Arg(33);

void bm_solve_poisson(benchmark::State& state) {
    varfrac::OrderField order = varfrac::OrderField::constant(1, 0.5);
    varfrac::CylinderMesh mesh(1, static_cast<int>(state.range(0)),
                               static_cast<int>(state.range(0)),
                               varfrac::default_tau(kPi * kPi, 1e-8),
                               varfrac::default_gamma(order));
    varfrac::WeightSpec spec(order, varfrac::GsVariant::Pointwise, 2.0);
    varfrac::ExtensionSystem sys = varfrac::assemble(mesh, spec);
    std::vector<double> b = varfrac::load_from_base_function(
        sys, [](const varfrac::Point& x) { return std::sin(kPi * x[0]); });
    for (auto _ : state) {
        varfrac::PoissonSolution sol = varfrac::solve_poisson(sys, b);
        benchmark::DoNotOptimize(sol.energy);
    }
}
BENCHMARK(bm_solve_poisson)->Arg(33)->Arg(65);

void bm_mode_flux(benchmark::State& state) {
    for (auto _ : state) {
        double flux =
            varfrac::mode_dtn_1d(kPi * kPi, 0.5, static_cast<int>(state.range(0)), 6.0, 8.0);
        benchmark::DoNotOptimize(flux);
    }
}
BENCHMARK(bm_mode_flux)->Arg(256)->Arg(1024);

void bm_seminorm(benchmark::State& state) {
    varfrac::WeightSpec spec(varfrac::OrderField::constant(1, 0.6),
                             varfrac::GsVariant::Pointwise, 2.0);
    const int cells = static_cast<int>(state.range(0));
    std::vector<double> vals(cells + 1);
    for (int i = 0; i <= cells; ++i)
        vals[i] = std::sin(kPi * static_cast<double>(i) / cells);
    varfrac::GridFunction1D v(std::move(vals));
    for (auto _ : state) {
        varfrac::SeminormResult r = varfrac::seminorm_A(spec, 2.0, v);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(bm_seminorm)->Arg(32)->Arg(64);

void bm_phi_weights(benchmark::State& state) {
    varfrac::WeightSpec spec(step_field(1), varfrac::GsVariant::Pointwise, 2.0);
    double t = 0.3;
    for (auto _ : state) {
        t = (t < 0.9) ? t + 1e-4 : 0.1;
        varfrac::PhiWeights w = varfrac::phi_weights(spec, 2.0, 0, {t, 0.0}, t, 0.77);
        benchmark::DoNotOptimize(w.w);
    }
}
BENCHMARK(bm_phi_weights);

} // namespace

BENCHMARK_MAIN();
