#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "willmore/app.hpp"
#include "willmore/error.hpp"

namespace willmore::app {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size() || std::isnan(v)) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    return v;
}

int to_int(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    int v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (out.size() == 1 && out.front().empty()) out.clear();
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename T>
Setter number(T RunConfig::*section, double T::*field) {
    return [=](RunConfig& c, const std::string& k, const std::string& v) { (c.*section).*field = to_double(k, v); };
}

template <typename T>
Setter integer(T RunConfig::*section, int T::*field) {
    return [=](RunConfig& c, const std::string& k, const std::string& v) { (c.*section).*field = to_int(k, v); };
}

template <typename T>
Setter text(T RunConfig::*section, std::string T::*field) {
    return [=](RunConfig& c, const std::string&, const std::string& v) { (c.*section).*field = trim(v); };
}

const std::map<std::string, Setter>& setters() {
    using C = RunConfig;
    static const std::map<std::string, Setter> table = {
        {"domain.x_min", number(&C::domain, &C::Domain::x_min)},
        {"domain.x_max", number(&C::domain, &C::Domain::x_max)},
        {"domain.y_min", number(&C::domain, &C::Domain::y_min)},
        {"domain.y_max", number(&C::domain, &C::Domain::y_max)},
        {"grid.n1", integer(&C::grid, &C::GridSize::n1)},
        {"grid.n2", integer(&C::grid, &C::GridSize::n2)},
        {"anisotropy.kind", text(&C::anisotropy, &C::Anisotropy::kind)},
        {"anisotropy.g11", number(&C::anisotropy, &C::Anisotropy::g11)},
        {"anisotropy.g12", number(&C::anisotropy, &C::Anisotropy::g12)},
        {"anisotropy.g22", number(&C::anisotropy, &C::Anisotropy::g22)},
        {"anisotropy.eps_abs", number(&C::anisotropy, &C::Anisotropy::eps_abs)},
        {"bc.kind", text(&C::bc, &C::Bc::kind)},
        {"bc.dirichlet", text(&C::bc, &C::Bc::dirichlet)},
        {"initial.preset", text(&C::initial, &C::Initial::preset)},
        {"initial.csv_path", text(&C::initial, &C::Initial::csv_path)},
        {"time.t_end", number(&C::time, &C::Time::t_end)},
        {"time.snapshot_count", integer(&C::time, &C::Time::snapshot_count)},
        {"time.snapshot_times",
         [](C& c, const std::string& k, const std::string& v) {
             c.time.snapshot_times.clear();
             for (const auto& item : split(v)) c.time.snapshot_times.push_back(to_double(k, item));
         }},
        {"time.tolerance", number(&C::time, &C::Time::tolerance)},
        {"time.dt_init", number(&C::time, &C::Time::dt_init)},
        {"time.dt_min", number(&C::time, &C::Time::dt_min)},
        {"time.dt_max", number(&C::time, &C::Time::dt_max)},
        {"mms.r", number(&C::mms, &C::Mms::r)},
        {"mms.n", integer(&C::mms, &C::Mms::n)},
        {"mms.sigma", number(&C::mms, &C::Mms::sigma)},
        {"mms.tau_levels", integer(&C::mms, &C::Mms::tau_levels)},
        {"mms.forced", [](C& c, const std::string& k, const std::string& v) { c.mms.forced = to_bool(k, v); }},
        {"mms.forcing_points", integer(&C::mms, &C::Mms::forcing_points)},
        {"eoc.meshes",
         [](C& c, const std::string& k, const std::string& v) {
             c.eoc.meshes.clear();
             for (const auto& item : split(v)) c.eoc.meshes.push_back(to_int(k, item));
         }},
        {"wulff.samples", integer(&C::wulff, &C::Wulff::samples)},
        {"wulff.q3", number(&C::wulff, &C::Wulff::q3)},
        {"output.directory", text(&C::output, &C::Output::directory)},
        {"output.formats",
         [](C& c, const std::string& k, const std::string& v) {
             c.output.csv = false;
             c.output.vtk = false;
             for (const auto& item : split(v)) {
                 if (item == "csv") {
                     c.output.csv = true;
                 } else if (item == "vtk") {
                     c.output.vtk = true;
                 } else {
                     throw ConfigError(k, "unknown format '" + item + "' (expected csv, vtk)");
                 }
             }
         }},
    };
    return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void RunConfig::validate() const {
    for (const auto& [key, v] :
         {std::pair{"domain.x_min", domain.x_min}, {"domain.x_max", domain.x_max}, {"domain.y_min", domain.y_min},
          {"domain.y_max", domain.y_max}}) {
        require(std::isfinite(v), key, "must be finite");
    }
    require(domain.x_max > domain.x_min, "domain.x_max", "must exceed domain.x_min");
    require(domain.y_max > domain.y_min, "domain.y_max", "must exceed domain.y_min");
    require(grid.n1 >= 2, "grid.n1", "must be at least 2");
    require(grid.n2 >= 2, "grid.n2", "must be at least 2");

    const auto& a = anisotropy;
    require(a.kind == "isotropic" || a.kind == "quadratic" || a.kind == "abs", "anisotropy.kind",
            "expected isotropic, quadratic or abs, got '" + a.kind + "'");
    if (a.kind == "quadratic") {
        require(std::isfinite(a.g12), "anisotropy.g12", "must be finite");
        require(finite_positive(a.g11), "anisotropy.g11", "must be positive");
        require(finite_positive(a.g22), "anisotropy.g22", "must be positive");
        require(a.g11 * a.g22 - a.g12 * a.g12 > 0.0, "anisotropy.g12", "matrix must be positive definite");
    }
    if (a.kind == "abs") require(finite_positive(a.eps_abs), "anisotropy.eps_abs", "must be positive");

    require(bc.kind == "dirichlet" || bc.kind == "neumann", "bc.kind",
            "expected dirichlet or neumann, got '" + bc.kind + "'");
    require(bc.dirichlet == "zero" || bc.dirichlet == "mms_zeta", "bc.dirichlet",
            "expected zero or mms_zeta, got '" + bc.dirichlet + "'");

    const auto& p = initial.preset;
    require(p == "zero" || p == "sine_radial" || p == "mms_zeta" || p == "csv", "initial.preset",
            "expected zero, sine_radial, mms_zeta or csv, got '" + p + "'");
    require(p != "csv" || !initial.csv_path.empty(), "initial.csv_path", "required when initial.preset = csv");

    require(finite_positive(time.t_end), "time.t_end", "must be positive");
    require(time.snapshot_count >= 1, "time.snapshot_count", "must be at least 1");
    for (double t : time.snapshot_times) {
        require(t >= 0.0 && t <= time.t_end, "time.snapshot_times", "entries must lie in [0, time.t_end]");
    }
    require(time.tolerance > 0.0, "time.tolerance", "must be positive");
    require(finite_positive(time.dt_init), "time.dt_init", "must be positive");
    require(finite_positive(time.dt_min), "time.dt_min", "must be positive");
    require(std::isfinite(time.dt_max) && time.dt_max >= time.dt_min, "time.dt_max", "must be >= time.dt_min");

    require(finite_positive(mms.r), "mms.r", "must be positive");
    require(mms.n > 0 && mms.n % 2 == 0, "mms.n", "must be a positive even integer");
    require(finite_positive(mms.sigma), "mms.sigma", "must be positive");
    require(mms.tau_levels >= 1, "mms.tau_levels", "must be at least 1");
    require(mms.forcing_points >= 2, "mms.forcing_points", "must be at least 2");

    require(!eoc.meshes.empty(), "eoc.meshes", "must list at least one mesh");
    for (std::size_t k = 0; k < eoc.meshes.size(); ++k) {
        require(eoc.meshes[k] >= 2, "eoc.meshes", "entries must be at least 2");
        require(k == 0 || eoc.meshes[k] > eoc.meshes[k - 1], "eoc.meshes", "must be strictly increasing");
    }

    require(wulff.samples >= 8, "wulff.samples", "must be at least 8");
    require(std::isfinite(wulff.q3), "wulff.q3", "must be finite");

    require(!output.directory.empty(), "output.directory", "must not be empty");
    require(output.csv || output.vtk, "output.formats", "must name csv and/or vtk");
}

Grid RunConfig::make_grid() const {
    return Grid(domain.x_min, domain.y_min, domain.x_max - domain.x_min, domain.y_max - domain.y_min, grid.n1,
                grid.n2);
}

SurfaceEnergy RunConfig::surface_energy() const {
    if (anisotropy.kind == "quadratic") {
        return SurfaceEnergy::quadratic_form(anisotropy.g11, anisotropy.g12, anisotropy.g22);
    }
    if (anisotropy.kind == "abs") return SurfaceEnergy::regularized_abs(anisotropy.eps_abs);
    return SurfaceEnergy::isotropic();
}

mms::ZetaParams RunConfig::zeta_params() const { return {mms.r, mms.n, mms.sigma}; }

StepperConfig RunConfig::stepper() const {
    StepperConfig s;
    s.tolerance = time.tolerance;
    s.dt_init = time.dt_init;
    s.dt_min = time.dt_min;
    s.dt_max = time.dt_max;
    return s;
}

RunConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()), e.message());
    }
    RunConfig cfg;
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError(section, "key outside of any section");
        const auto first = table.lower_bound(section + ".");
        if (first == table.end() || first->first.rfind(section + ".", 0) != 0) {
            throw ConfigError(section, "unknown section");
        }
        for (const auto& [name, value] : body) {
            const std::string key = section + "." + name;
            const auto it = table.find(key);
            if (it == table.end()) throw ConfigError(key, "unknown key");
            it->second(cfg, key, value.data());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    return parse_config(in);
}

void apply_environment(RunConfig& cfg) {
    const char* dir = std::getenv("WILLMORE_OUTPUT_DIR");
    if (dir != nullptr && *dir != '\0') cfg.output.directory = dir;
}

}  // namespace willmore::app
