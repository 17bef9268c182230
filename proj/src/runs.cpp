#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "willmore/app.hpp"
#include "willmore/error.hpp"

namespace willmore::app {

namespace {

std::string num17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> requested_times(const RunConfig& cfg) {
    const double t_end = cfg.time.t_end;
    std::vector<double> times{0.0, t_end};
    for (int k = 1; k < cfg.time.snapshot_count; ++k) times.push_back(t_end * k / cfg.time.snapshot_count);
    times.insert(times.end(), cfg.time.snapshot_times.begin(), cfg.time.snapshot_times.end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

OdeRhs as_ode(SpatialOperator& op) {
    return [&op](double t, std::span<const double> u, std::span<double> dudt) { op.evaluate(t, u, dudt); };
}

}  // namespace

FlowProblem make_problem(const RunConfig& cfg) {
    const Grid grid = cfg.make_grid();
    const SurfaceEnergy energy = cfg.surface_energy();
    const mms::ZetaParams zp = cfg.zeta_params();

    BoundaryCondition bc = BoundaryCondition::neumann();
    if (cfg.bc.kind == "dirichlet") {
        bc = cfg.bc.dirichlet == "mms_zeta"
                 ? BoundaryCondition::dirichlet([zp](double x, double y, double t) { return mms::zeta(zp, x, y, t); },
                                                [](double, double, double) { return 0.0; })
                 : BoundaryCondition::zero_dirichlet();
    }
    FlowProblem problem{grid, energy, bc, {}, {}};
    if (cfg.mms.forced) {
        const auto f = mms::make_forcing(energy, zp, mms::default_delta(grid));
        problem.nodal_forcing = mms::ForcingTable(grid, f, 0.0, cfg.time.t_end, cfg.mms.forcing_points).as_nodal();
    }
    return problem;
}

GridFunction initial_state(const RunConfig& cfg, const Grid& grid) {
    const auto& preset = cfg.initial.preset;
    if (preset == "sine_radial") {
        return GridFunction::sample(
            grid, [](double x, double y) { return std::sin(3.0 * std::numbers::pi * std::sqrt(x * x + y * y)); });
    }
    if (preset == "mms_zeta") {
        const mms::ZetaParams zp = cfg.zeta_params();
        return GridFunction::sample(grid, [zp](double x, double y) { return mms::zeta(zp, x, y, 0.0); });
    }
    if (preset == "csv") {
        try {
            return read_snapshot_csv(cfg.initial.csv_path, grid);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError("initial.csv_path", e.what());
        }
    }
    return GridFunction(grid);
}

EvolveResult run_evolve(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const FlowProblem problem = make_problem(cfg);
    const Grid& grid = problem.grid;
    const std::filesystem::path dir = cfg.output.directory;
    std::filesystem::create_directories(dir);

    GridFunction u0 = initial_state(cfg, grid);
    apply_u_bc(problem, u0, 0.0);

    SpatialOperator op(problem);
    EnergyMonitor monitor(problem.energy, u0, 0.0);
    GridFunction scratch(grid);
    const StepObserver observer = [&](double t, std::span<const double> u, const StepOutcome&) {
        std::copy(u.begin(), u.end(), scratch.values().begin());
        apply_u_bc(problem, scratch, t);
        monitor.observe(t, scratch);
    };

    EvolveResult result;
    std::vector<StateSnapshot> states;
    std::vector<double> last_state;
    try {
        IntegrationResult r = integrate(as_ode(op), {u0.values().begin(), u0.values().end()}, 0.0, cfg.time.t_end,
                                        cfg.stepper(), requested_times(cfg), observer);
        states = std::move(r.snapshots);
        result.accepted_steps = r.accepted_steps;
        result.rejected_steps = r.rejected_steps;
    } catch (const IntegrationAborted& e) {
        states = e.snapshots();
        last_state = e.last_state();
        result.diverged = true;
        result.t_failed = e.t();
        result.failure = e.what();
    }
    result.energy = monitor.reports();

    std::ofstream index(dir / "snapshots.csv");
    index << "t,file\n";
    for (const auto& s : states) {
        FlowFields f = op.fields(s.t, s.u);
        const std::string stem = "snapshot_t" + time_tag(s.t);
        if (cfg.output.csv) {
            result.files.push_back(dir / (stem + ".csv"));
            write_snapshot_csv(result.files.back(), f);
        }
        if (cfg.output.vtk) {
            result.files.push_back(dir / (stem + ".vtk"));
            write_snapshot_vtk(result.files.back(), f, s.t);
        }
        index << num17(s.t) << ',' << stem << '\n';
        result.snapshots.push_back({s.t, std::move(f)});
    }
    if (result.diverged) {
        const auto path = dir / ("failed_t" + time_tag(result.t_failed) + ".csv");
        GridFunction u(grid, last_state);
        apply_u_bc(problem, u, result.t_failed);
        FlowFields f{u, GridFunction(grid), q_field(u), GridFunction(grid)};
        try {
            f = op.fields(result.t_failed, last_state);
        } catch (const DivergenceError&) {
            // keep u and Q; w and H of a state that no longer evaluates stay zero
        }
        write_snapshot_csv(path, f);
        result.files.push_back(path);
    }
    write_energy_csv(dir / "energy.csv", result.energy);
    result.files.push_back(dir / "energy.csv");
    result.neumann_fallbacks = op.neumann_fallbacks();

    const double w_end = result.energy.back().willmore;
    log << "evolve: " << result.accepted_steps << " accepted, " << result.rejected_steps << " rejected steps, "
        << result.snapshots.size() << " snapshots in " << dir.string() << '\n';
    log << "evolve: discrete Willmore energy " << result.energy.front().willmore << " -> " << w_end
        << " (with the 1/2 prefactor of the functional: " << 0.5 * w_end << ")\n";
    if (result.neumann_fallbacks > 0) {
        log << "evolve: " << result.neumann_fallbacks << " degenerate Neumann extractions fell back to copies\n";
    }
    if (result.diverged) log << "evolve: stopped at t = " << result.t_failed << ": " << result.failure << '\n';
    return result;
}

MeshErrors solve_mms_mesh(const RunConfig& cfg, int mesh) {
    const mms::ZetaParams zp = cfg.zeta_params();
    const SurfaceEnergy energy = cfg.surface_energy();
    const Grid grid = Grid::centered_square(zp.r, mesh);
    const double t_end = cfg.time.t_end;
    const auto zeta_fn = [zp](double x, double y, double t) { return mms::zeta(zp, x, y, t); };

    FlowProblem problem{grid, energy,
                        BoundaryCondition::dirichlet(zeta_fn, [](double, double, double) { return 0.0; }), {}, {}};
    problem.nodal_forcing =
        mms::ForcingTable(grid, mms::make_forcing(energy, zp, mms::default_delta(grid)), 0.0, t_end,
                          cfg.mms.forcing_points)
            .as_nodal();
    SpatialOperator op(problem);

    const int levels = cfg.mms.tau_levels;
    const double tau = t_end / levels;
    std::vector<double> times;
    for (int k = 0; k <= levels; ++k) times.push_back(k == levels ? t_end : t_end * k / levels);

    const GridFunction u0 = GridFunction::sample(grid, [&](double x, double y) { return zeta_fn(x, y, 0.0); });
    MeshErrors out;
    out.u.mesh = out.w.mesh = mesh;
    out.u.h = out.w.h = grid.h1();
    IntegrationResult r;
    try {
        r = integrate(as_ode(op), {u0.values().begin(), u0.values().end()}, 0.0, t_end, cfg.stepper(), times);
    } catch (const IntegrationAborted&) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        out.u.failed = out.w.failed = true;
        out.u.err_l1 = out.u.err_l2 = out.u.err_linf = nan;
        out.w.err_l1 = out.w.err_l2 = out.w.err_linf = nan;
        return out;
    }

    std::vector<mms::TimedField> us, ws;
    for (const auto& s : r.snapshots) {
        FlowFields f = op.fields(s.t, s.u);
        us.push_back({s.t, std::move(f.u)});
        ws.push_back({s.t, std::move(f.w)});
    }
    const auto nu = mms::spacetime_norms(us, zp, tau);
    const auto nw = mms::spacetime_norms(
        ws, [&](double x, double y, double t) { return mms::w_exact(energy, zp, x, y, t); }, tau);
    out.u.err_l1 = nu.l1;
    out.u.err_l2 = nu.l2;
    out.u.err_linf = nu.linf;
    out.w.err_l1 = nw.l1;
    out.w.err_l2 = nw.l2;
    out.w.err_linf = nw.linf;
    return out;
}

EocResult run_eoc(const RunConfig& cfg, std::ostream& log, const MeshSolver& solver) {
    cfg.validate();
    std::vector<mms::ErrorRecord> u_records, w_records;
    for (int mesh : cfg.eoc.meshes) {
        const MeshErrors e = solver(cfg, mesh);
        log << "eoc: mesh " << mesh << (e.u.failed ? " failed" : " done") << '\n';
        u_records.push_back(e.u);
        w_records.push_back(e.w);
    }
    EocResult result{mms::eoc_table(u_records), mms::eoc_table(w_records)};

    const std::filesystem::path dir = cfg.output.directory;
    write_eoc_csv(dir / "eoc_u.csv", result.u);
    write_eoc_csv(dir / "eoc_w.csv", result.w);
    const std::string table =
        format_eoc_table(result.u, "EOC of u") + "\n" + format_eoc_table(result.w, "EOC of w");
    std::ofstream(dir / "eoc.txt") << table;
    log << table;
    return result;
}

std::vector<WulffPoint> run_wulff(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto points = wulff_boundary(cfg.surface_energy(), cfg.wulff.samples, cfg.wulff.q3);
    const std::filesystem::path path = std::filesystem::path(cfg.output.directory) / "wulff.csv";
    write_wulff_csv(path, points);
    log << "wulff: " << points.size() << " points in " << path.string() << '\n';
    return points;
}

}  // namespace willmore::app
