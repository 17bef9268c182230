#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "willmore/anisotropy.hpp"
#include "willmore/energy.hpp"
#include "willmore/grid.hpp"
#include "willmore/integrator.hpp"
#include "willmore/mms.hpp"
#include "willmore/spatial.hpp"

namespace willmore::app {

/// Run configuration read from an INI file. Keys are addressed as
/// "section.key"; see configs/ for annotated examples.
struct RunConfig {
    struct Domain {
        double x_min = -4.0;
        double x_max = 4.0;
        double y_min = -4.0;
        double y_max = 4.0;
    } domain;

    struct GridSize {
        int n1 = 32;
        int n2 = 32;
    } grid;

    struct Anisotropy {
        std::string kind = "isotropic";  // isotropic | quadratic | abs
        double g11 = 1.0;
        double g12 = 0.0;
        double g22 = 1.0;
        double eps_abs = 0.1;
    } anisotropy;

    struct Bc {
        std::string kind = "dirichlet";  // dirichlet | neumann
        std::string dirichlet = "zero";  // zero | mms_zeta (u = zeta, w = 0)
    } bc;

    struct Initial {
        std::string preset = "zero";  // zero | sine_radial | mms_zeta | csv
        std::string csv_path;
    } initial;

    struct Time {
        double t_end = 1e-3;
        int snapshot_count = 1;             // uniform snapshots t_end * k / count, k = 1..count
        std::vector<double> snapshot_times;  // extra snapshot times in [0, t_end]
        double tolerance = 1e-7;            // "inf" selects fixed steps of dt_init
        double dt_init = 1e-8;
        double dt_min = 1e-16;
        double dt_max = 1e-3;
    } time;

    struct Mms {
        double r = 4.0;
        int n = 2;
        double sigma = 1.0;
        int tau_levels = 10;
        bool forced = false;  // evolve: add the manufactured forcing
        int forcing_points = 12;
    } mms;

    struct Eoc {
        std::vector<int> meshes{16, 32, 64};
    } eoc;

    struct Wulff {
        int samples = 360;
        double q3 = 0.0;
    } wulff;

    struct Output {
        std::string directory = "output";
        bool csv = true;
        bool vtk = false;
    } output;

    /// Throws ConfigError naming the first offending key.
    void validate() const;

    Grid make_grid() const;
    SurfaceEnergy surface_energy() const;
    mms::ZetaParams zeta_params() const;
    StepperConfig stepper() const;
};

/// Strict INI parsing: unknown sections and keys, duplicates and malformed
/// values are rejected with a ConfigError naming the key. The result is
/// validated.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Replaces output.directory with $WILLMORE_OUTPUT_DIR when that is set and
/// non-empty.
void apply_environment(RunConfig& cfg);

/// The flow problem described by cfg (grid, energy, boundary condition and,
/// when mms.forced is set, the tabulated manufactured forcing on [0, t_end]).
FlowProblem make_problem(const RunConfig& cfg);

/// Initial state on the closure, boundary values not yet applied.
GridFunction initial_state(const RunConfig& cfg, const Grid& grid);

// Serialization

/// Header x,y,u,w,Q,H; one row per node, j outer, i inner; 17 significant digits.
void write_snapshot_csv(const std::filesystem::path& path, const FlowFields& fields);

/// Reads the u column of a snapshot CSV. Throws Error unless the rows match
/// the grid's node count and coordinates.
GridFunction read_snapshot_csv(const std::filesystem::path& path, const Grid& grid);

/// Legacy VTK STRUCTURED_POINTS with one SCALARS block per field.
void write_snapshot_vtk(const std::filesystem::path& path, const FlowFields& fields, double t);

/// Columns t,willmore,dissipation,drift.
void write_energy_csv(const std::filesystem::path& path, std::span<const EnergyReport> reports);

/// Columns mesh,h,err_l1,eoc_l1,err_l2,eoc_l2,err_linf,eoc_linf; failed rows
/// and undefined orders are written as "nan".
void write_eoc_csv(const std::filesystem::path& path, std::span<const mms::EocRow> rows);

/// Aligned plain-text table with the same columns.
std::string format_eoc_table(std::span<const mms::EocRow> rows, const std::string& title);

/// Columns theta,x,y.
void write_wulff_csv(const std::filesystem::path& path, std::span<const WulffPoint> points);

/// "%.6e" of t, used in snapshot file names.
std::string time_tag(double t);

// Runs

struct Snapshot {
    double t;
    FlowFields fields;
};

struct EvolveResult {
    std::vector<Snapshot> snapshots;
    std::vector<EnergyReport> energy;
    std::vector<std::filesystem::path> files;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t neumann_fallbacks = 0;
    bool diverged = false;
    double t_failed = 0.0;
    std::string failure;
};

/// Integrates the configured flow from t = 0 to t_end, writing a snapshot at
/// t = 0, every requested time and t_end, plus energy.csv and an index
/// snapshots.csv. On divergence the snapshots reached so far are kept and
/// the last accepted state is written to failed_t<t>.csv.
EvolveResult run_evolve(const RunConfig& cfg, std::ostream& log);

struct MeshErrors {
    mms::ErrorRecord u;
    mms::ErrorRecord w;
};

/// Solves the forced problem on one mesh of the ladder.
using MeshSolver = std::function<MeshErrors(const RunConfig& cfg, int mesh)>;

/// Forced Dirichlet problem on [-r, r]^2 with mesh x mesh cells from
/// u0 = zeta(., 0), u = zeta and w = 0 on the boundary; space-time errors of
/// u and w against zeta and w(zeta) on tau_levels + 1 uniform time levels.
/// The [domain] and [grid] sections are not used.
MeshErrors solve_mms_mesh(const RunConfig& cfg, int mesh);

struct EocResult {
    std::vector<mms::EocRow> u;
    std::vector<mms::EocRow> w;
};

/// Runs the solver over eoc.meshes and writes eoc_u.csv, eoc_w.csv and
/// eoc.txt. A mesh that fails is recorded as a failed row.
EocResult run_eoc(const RunConfig& cfg, std::ostream& log, const MeshSolver& solver = solve_mms_mesh);

/// Writes wulff.csv with wulff.samples points.
std::vector<WulffPoint> run_wulff(const RunConfig& cfg, std::ostream& log);

/// Command line front end: `willmore evolve|eoc|wulff --config <file>`.
/// Returns 0 on success, 2 on configuration errors, 3 on divergence and 1
/// on any other failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace willmore::app
