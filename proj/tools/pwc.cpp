// pwc: construct piecewise lambda-affine contractions, certify their
// periodic orbits, and emit CSV/JSON artifacts for plotting and regression.

#include <CLI11.hpp>

#include "pwc/cli.hpp"

namespace {

void add_common_options(CLI::App* cmd, pwc::RunConfig& cfg) {
    cmd->add_option("--spec", cfg.spec_path, "map-spec JSON file");
    cmd->add_option("--lambda", cfg.lambda_str, "slope lambda as p/q or decimal");
    cmd->add_option("--b", cfg.b_str,
                    "intercept b; a comma-separated list when --a is given");
    cmd->add_option("--a", cfg.a_list, "comma-separated partition points, starting at 0");
    cmd->add_option("--budget", cfg.budget, "orbit step budget");
    cmd->add_option("--pmax", cfg.p_max, "longest candidate period");
    cmd->add_option("--depth", cfg.depth, "seeding / search depth");
    cmd->add_option("--qmax", cfg.q_max, "largest tongue denominator");
    cmd->add_option("--grid", cfg.grid, "grid resolution M (lambda = j/M)");
    cmd->add_option("--mode", cfg.mode, "arithmetic mode: exact|float")
        ->check(CLI::IsMember({"exact", "float"}));
    cmd->add_option("--eps", cfg.eps_list, "comma-separated epsilon ladder");
    cmd->add_option("--out", cfg.out_path, "artifact path (stdout when omitted)");
    cmd->add_option("--format", cfg.format, "csv|json where the command supports both")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--decimal", cfg.decimal, "render scalars as decimals");
    cmd->add_flag("--strict", cfg.strict, "exit 3 on UNDECIDED outcomes");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise lambda-affine contraction toolkit"};
    app.require_subcommand(1);
    pwc::RunConfig cfg;

    auto* map_cmd = app.add_subcommand("map", "build a map and dump its branches");
    auto* orbit_cmd = app.add_subcommand("orbit", "iterate one orbit");
    orbit_cmd->add_option("--x", cfg.x_str, "starting point");
    auto* classify_cmd = app.add_subcommand("classify", "certify cycles and classify");
    auto* tongues_cmd = app.add_subcommand("tongues", "rational tongue atlas");
    auto* rho_cmd = app.add_subcommand("rho", "rotation number of a contracted rotation");
    auto* conn_cmd = app.add_subcommand("connections", "detect singular connections");
    conn_cmd->add_flag("--roots", cfg.roots, "emit root brackets of the witness polynomial");
    conn_cmd->add_flag("--vset", cfg.vset, "emit the branch-bifurcation slopes of the family");
    conn_cmd->add_option("--width", cfg.width_str, "root bracket width");
    auto* entropy_cmd = app.add_subcommand("entropy", "itinerary-count profile");
    entropy_cmd->add_option("--nmax", cfg.n_max, "profile depth");
    auto* boxdim_cmd = app.add_subcommand("boxdim", "box-counting profile of an orbit sample");
    boxdim_cmd->add_option("--transient", cfg.transient, "steps discarded before sampling");
    boxdim_cmd->add_option("--sample", cfg.sample, "sampled steps per seed");
    auto* sweep_cmd = app.add_subcommand("sweep", "classify a family across a lambda grid");
    sweep_cmd->add_option("--lmin", cfg.lmin_str, "exclusive lower lambda bound");
    sweep_cmd->add_option("--lmax", cfg.lmax_str, "exclusive upper lambda bound");

    for (auto* cmd : {map_cmd, orbit_cmd, classify_cmd, tongues_cmd, rho_cmd, conn_cmd,
                      entropy_cmd, boxdim_cmd, sweep_cmd})
        add_common_options(cmd, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return pwc::run_guarded(cfg);
}
