#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "willmore/app.hpp"
#include "willmore/error.hpp"

namespace willmore::app {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw Error("error while writing " + path.string());
}

std::vector<double> parse_row(const std::string& line, std::size_t columns, const std::string& where) {
    std::vector<double> v;
    const char* p = line.c_str();
    for (std::size_t c = 0; c < columns; ++c) {
        char* end = nullptr;
        v.push_back(std::strtod(p, &end));
        if (end == p) throw Error(where + ": malformed number");
        p = end;
        if (c + 1 < columns) {
            if (*p != ',') throw Error(where + ": expected " + std::to_string(columns) + " columns");
            ++p;
        }
    }
    while (*p == ' ' || *p == '\r') ++p;
    if (*p != '\0') throw Error(where + ": trailing characters");
    return v;
}

}  // namespace

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", t);
    return buf;
}

void write_snapshot_csv(const std::filesystem::path& path, const FlowFields& f) {
    const Grid& g = f.u.grid();
    auto out = open_out(path);
    out << "x,y,u,w,Q,H\n";
    for (int j = 0; j <= g.n2(); ++j) {
        for (int i = 0; i <= g.n1(); ++i) {
            out << num(g.x(i)) << ',' << num(g.y(j)) << ',' << num(f.u(i, j)) << ',' << num(f.w(i, j)) << ','
                << num(f.Q(i, j)) << ',' << num(f.H(i, j)) << '\n';
        }
    }
    close_out(out, path);
}

GridFunction read_snapshot_csv(const std::filesystem::path& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,u", 0) != 0) {
        throw Error(path.string() + ": expected a header starting with x,y,u");
    }
    std::size_t columns = 1;
    for (char c : line) columns += c == ',';

    GridFunction u(grid);
    const double tol_x = 1e-9 * grid.l1();
    const double tol_y = 1e-9 * grid.l2();
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::string where = path.string() + ":" + std::to_string(row + 2);
        if (row >= grid.node_count()) throw Error(where + ": more rows than grid nodes");
        const auto v = parse_row(line, columns, where);
        const int i = static_cast<int>(row % static_cast<std::size_t>(grid.n1() + 1));
        const int j = static_cast<int>(row / static_cast<std::size_t>(grid.n1() + 1));
        if (std::abs(v[0] - grid.x(i)) > tol_x || std::abs(v[1] - grid.y(j)) > tol_y) {
            throw Error(where + ": coordinates do not match the configured grid");
        }
        u(i, j) = v[2];
        ++row;
    }
    if (row != grid.node_count()) {
        throw Error(path.string() + ": " + std::to_string(row) + " rows, grid has " +
                    std::to_string(grid.node_count()) + " nodes");
    }
    return u;
}

void write_snapshot_vtk(const std::filesystem::path& path, const FlowFields& f, double t) {
    const Grid& g = f.u.grid();
    auto out = open_out(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "willmore t=" << num(t) << "\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.n1() + 1 << ' ' << g.n2() + 1 << " 1\n";
    out << "ORIGIN " << num(g.x_origin()) << ' ' << num(g.y_origin()) << " 0\n";
    out << "SPACING " << num(g.h1()) << ' ' << num(g.h2()) << " 1\n";
    out << "POINT_DATA " << g.node_count() << '\n';
    const std::pair<const char*, const GridFunction*> blocks[] = {{"u", &f.u}, {"w", &f.w}, {"Q", &f.Q}, {"H", &f.H}};
    for (const auto& [name, field] : blocks) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : field->values()) out << num(v) << '\n';
    }
    close_out(out, path);
}

void write_energy_csv(const std::filesystem::path& path, std::span<const EnergyReport> reports) {
    auto out = open_out(path);
    out << "t,willmore,dissipation,drift\n";
    for (const auto& r : reports) {
        out << num(r.t) << ',' << num(r.willmore) << ',' << num(r.dissipation) << ',' << num(r.drift) << '\n';
    }
    close_out(out, path);
}

void write_eoc_csv(const std::filesystem::path& path, std::span<const mms::EocRow> rows) {
    auto out = open_out(path);
    out << "mesh,h,err_l1,eoc_l1,err_l2,eoc_l2,err_linf,eoc_linf\n";
    for (const auto& r : rows) {
        const auto& e = r.record;
        const double nan = std::nan("");
        out << e.mesh << ',' << num(e.h) << ',' << num(e.failed ? nan : e.err_l1) << ',' << num(r.eoc_l1) << ','
            << num(e.failed ? nan : e.err_l2) << ',' << num(r.eoc_l2) << ',' << num(e.failed ? nan : e.err_linf)
            << ',' << num(r.eoc_linf) << '\n';
    }
    close_out(out, path);
}

std::string format_eoc_table(std::span<const mms::EocRow> rows, const std::string& title) {
    std::ostringstream s;
    auto err = [](double v, bool failed) {
        char buf[32];
        if (failed) return std::string("failed");
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return std::string(buf);
    };
    auto order = [](double v) {
        char buf[32];
        if (std::isnan(v)) return std::string("-");
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    s << title << '\n';
    s << std::setw(6) << "mesh" << std::setw(12) << "h" << std::setw(12) << "L1" << std::setw(7) << "EOC"
      << std::setw(12) << "L2" << std::setw(7) << "EOC" << std::setw(12) << "Linf" << std::setw(7) << "EOC" << '\n';
    for (const auto& r : rows) {
        const auto& e = r.record;
        s << std::setw(6) << e.mesh << std::setw(12) << err(e.h, false) << std::setw(12) << err(e.err_l1, e.failed)
          << std::setw(7) << order(r.eoc_l1) << std::setw(12) << err(e.err_l2, e.failed) << std::setw(7)
          << order(r.eoc_l2) << std::setw(12) << err(e.err_linf, e.failed) << std::setw(7) << order(r.eoc_linf)
          << '\n';
    }
    return s.str();
}

void write_wulff_csv(const std::filesystem::path& path, std::span<const WulffPoint> points) {
    auto out = open_out(path);
    out << "theta,x,y\n";
    for (const auto& p : points) out << num(p.theta) << ',' << num(p.x) << ',' << num(p.y) << '\n';
    close_out(out, path);
}

}  // namespace willmore::app
