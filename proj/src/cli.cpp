#include <ostream>

#include <CLI11.hpp>

#include "willmore/app.hpp"
#include "willmore/error.hpp"

namespace willmore::app {

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App cli{"Anisotropic Willmore flow of graphs"};
    cli.require_subcommand(1);
    std::string config;
    auto* evolve = cli.add_subcommand("evolve", "integrate the flow and write snapshots");
    auto* eoc = cli.add_subcommand("eoc", "manufactured-solution convergence study");
    auto* wulff = cli.add_subcommand("wulff", "sample the Wulff shape boundary");
    for (auto* sub : {evolve, eoc, wulff}) sub->add_option("--config", config, "INI run configuration")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config);
        apply_environment(cfg);
        if (evolve->parsed()) return run_evolve(cfg, out).diverged ? 3 : 0;
        if (eoc->parsed()) {
            const EocResult r = run_eoc(cfg, out);
            for (const auto& row : r.u) {
                if (row.record.failed) return 3;
            }
            return 0;
        }
        run_wulff(cfg, out);
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace willmore::app
