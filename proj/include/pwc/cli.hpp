#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pwc/json_io.hpp"
#include "pwc/metrics.hpp"
#include "pwc/orbit.hpp"
#include "pwc/rotation.hpp"

namespace pwc {

/// One parsed invocation. Exactly one artifact is produced per run; commands
/// compose through the shell, not through each other.
struct RunConfig {
    std::string command;
    std::string spec_path;
    std::string lambda_str;
    std::string b_str;        // single b, or a comma list when --a is given
    std::string a_list;       // comma-separated partition points
    long budget = -1;         // -1 = per-command default
    int p_max = 64;
    int depth = -1;           // -1 = per-command default
    int q_max = 5;
    int grid = 0;
    std::string mode = "exact";
    std::string eps_list;
    std::string out_path;
    std::string format;       // "" = per-command default
    bool decimal = false;
    bool strict = false;
    std::string x_str = "0";  // orbit start
    int n_max = 20;           // entropy depth
    std::string width_str = "1/1024";
    bool roots = false;
    bool vset = false;
    long transient = 200;
    long sample = 400;
    std::string lmin_str;
    std::string lmax_str;
};

namespace cli_detail {

inline std::vector<Rational> parse_scalar_list(const std::string& text) {
    std::vector<Rational> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) fail(errc::invalid_argument, "empty scalar list");
    return out;
}

inline MapSpec<Rational> resolve_spec(const RunConfig& cfg) {
    if (!cfg.spec_path.empty()) return load_map_spec(cfg.spec_path);
    if (!cfg.a_list.empty()) {
        if (cfg.b_str.empty() || cfg.lambda_str.empty())
            fail(errc::invalid_argument, "--a needs --b and --lambda");
        MapSpec<Rational> spec;
        spec.a = parse_scalar_list(cfg.a_list);
        spec.b = parse_scalar_list(cfg.b_str);
        spec.lambda = parse_rational(cfg.lambda_str);
        if (spec.a.size() == spec.b.size()) spec.a.push_back(Rational(1));
        return spec;
    }
    if (!cfg.lambda_str.empty() && !cfg.b_str.empty()) {
        MapSpec<Rational> spec;
        spec.a = {Rational(0), Rational(1)};
        spec.b = {parse_rational(cfg.b_str)};
        spec.lambda = parse_rational(cfg.lambda_str);
        return spec;
    }
    fail(errc::invalid_argument, "no map given: use --spec, --a/--b/--lambda, or --lambda/--b");
}

inline void write_artifact(const RunConfig& cfg, const std::string& bytes) {
    if (cfg.out_path.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot write '" + cfg.out_path + "'");
    out << bytes;
}

inline long budget_or(const RunConfig& cfg, long fallback) {
    return cfg.budget > 0 ? cfg.budget : fallback;
}

inline Budget make_budget(const RunConfig& cfg) {
    Budget b;
    b.t_max = budget_or(cfg, 100000);
    b.p_max = cfg.p_max;
    b.depth = cfg.depth > 0 ? cfg.depth : 8;
    return b;
}

inline void require_exact(const RunConfig& cfg) {
    if (cfg.mode != "exact")
        fail(errc::float_mode_unsupported,
             "'" + cfg.command + "' certifies exactly and rejects --mode float");
}

inline std::vector<Float> default_eps_ladder() {
    std::vector<Float> eps;
    for (int k = 4; k <= 16; ++k) eps.push_back(boost::multiprecision::ldexp(Float(1), -k));
    return eps;
}

template <ScalarType S>
std::vector<S> default_omega_seeds(const PwMap<S>& map) {
    std::vector<S> seeds = map.singular;
    for (auto& m : component_midpoints(map, 1)) seeds.push_back(m);
    for (int j = 0; j < 17; ++j) seeds.push_back(S(j) / 17);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return seeds;
}

inline int run_map(const RunConfig& cfg) {
    PwMap<Rational> map = build_map(resolve_spec(cfg));
    Json j = cfg.mode == "float" ? map_to_json(to_float_map(map), cfg.decimal)
                                 : map_to_json(map, cfg.decimal);
    write_artifact(cfg, j.dump(2) + "\n");
    return 0;
}

inline int run_orbit(const RunConfig& cfg) {
    PwMap<Rational> map = build_map(resolve_spec(cfg));
    long T = budget_or(cfg, 1000);
    bool csv = cfg.format.empty() ? true : cfg.format == "csv";
    std::string bytes;
    if (cfg.mode == "float") {
        PwMap<Float> fmap = to_float_map(map);
        OrbitRecord<Float> rec = iterate_orbit(fmap, to_float(parse_rational(cfg.x_str)), T);
        bytes = csv ? orbit_to_csv(rec, cfg.decimal) : orbit_to_json(rec, cfg.decimal).dump(2) + "\n";
    } else {
        OrbitRecord<Rational> rec = iterate_orbit(map, parse_rational(cfg.x_str), T);
        bytes = csv ? orbit_to_csv(rec, cfg.decimal) : orbit_to_json(rec, cfg.decimal).dump(2) + "\n";
    }
    write_artifact(cfg, bytes);
    return 0;
}

inline int run_classify(const RunConfig& cfg) {
    require_exact(cfg);
    PwMap<Rational> map = build_map(resolve_spec(cfg));
    Classification cls = classify_map(map, make_budget(cfg));
    write_artifact(cfg, classification_to_json(cls, cfg.decimal).dump(2) + "\n");
    return cfg.strict && cls.verdict == Verdict::undecided ? 3 : 0;
}

inline int run_tongues(const RunConfig& cfg) {
    require_exact(cfg);
    std::vector<Rational> grid;
    if (!cfg.lambda_str.empty()) grid.push_back(parse_rational(cfg.lambda_str));
    if (cfg.grid > 1)
        for (int j = 1; j < cfg.grid; ++j) grid.push_back(Rational(j, cfg.grid));
    if (grid.empty()) fail(errc::invalid_argument, "tongues needs --lambda or --grid");
    auto atlas = tongue_atlas(cfg.q_max, grid);
    write_artifact(cfg, atlas_to_csv(atlas, cfg.decimal));
    return 0;
}

inline int run_rho(const RunConfig& cfg) {
    require_exact(cfg);
    if (cfg.lambda_str.empty() || cfg.b_str.empty())
        fail(errc::invalid_argument, "rho needs --lambda and --b");
    Budget budget = make_budget(cfg);
    RotationResult res =
        rotation_number(parse_rational(cfg.lambda_str), parse_rational(cfg.b_str), budget);
    write_artifact(cfg, rotation_to_csv(res));
    return cfg.strict && res.kind == RotationKind::estimate ? 3 : 0;
}

inline int run_connections(const RunConfig& cfg) {
    require_exact(cfg);
    MapSpec<Rational> spec = resolve_spec(cfg);
    if (cfg.vset) {
        write_artifact(cfg, v_set_to_csv(v_set(spec), cfg.decimal));
        return 0;
    }
    PwMap<Rational> map = build_map(spec);
    int depth = cfg.depth > 0 ? cfg.depth : kDefaultConnectionDepth;
    auto conn = detect_connection(map, depth);
    if (cfg.roots) {
        std::vector<RootBracket> roots;
        if (conn) {
            std::vector<Rational> deltas;
            for (const auto& br : map.branches) deltas.push_back(br.delta);
            auto poly = connection_polynomial(conn->omega, conn->x, conn->y, deltas);
            roots = isolate_roots(poly, Rational(0), Rational(1), parse_rational(cfg.width_str));
        }
        write_artifact(cfg, roots_to_csv(roots, cfg.decimal));
        return 0;
    }
    write_artifact(cfg, connection_to_json(conn, cfg.decimal).dump(2) + "\n");
    return 0;
}

inline int run_entropy(const RunConfig& cfg) {
    PwMap<Rational> map = build_map(resolve_spec(cfg));
    EntropyProfile profile;
    if (cfg.mode == "float")
        profile = entropy_profile(to_float_map(map), cfg.n_max);
    else
        profile = entropy_profile(map, cfg.n_max);
    write_artifact(cfg, entropy_to_csv(profile));
    return 0;
}

inline int run_boxdim(const RunConfig& cfg) {
    PwMap<Rational> map = build_map(resolve_spec(cfg));
    long transient = cfg.budget > 0 ? cfg.budget : cfg.transient;
    std::vector<Float> eps = cfg.eps_list.empty() ? default_eps_ladder() : std::vector<Float>{};
    if (!cfg.eps_list.empty())
        for (auto& e : parse_scalar_list(cfg.eps_list)) eps.push_back(to_float(e));
    std::vector<Float> points;
    if (cfg.mode == "float") {
        PwMap<Float> fmap = to_float_map(map);
        points = omega_limit_sample(fmap, default_omega_seeds(fmap), transient, cfg.sample);
    } else {
        points = omega_limit_sample(map, default_omega_seeds(map), transient, cfg.sample);
    }
    BoxCountProfile profile = box_dimension_estimate(points, eps);
    std::cerr << "boxdim: slope " << format_double(profile.slope) << " over "
              << profile.rows.size() << " epsilons\n";
    write_artifact(cfg, boxdim_to_csv(profile));
    return 0;
}

inline int run_sweep(const RunConfig& cfg) {
    require_exact(cfg);
    if (cfg.a_list.empty() || cfg.b_str.empty())
        fail(errc::invalid_argument, "sweep needs the family --a and --b");
    std::vector<Rational> a = parse_scalar_list(cfg.a_list);
    std::vector<Rational> b = parse_scalar_list(cfg.b_str);
    if (a.size() == b.size()) a.push_back(Rational(1));
    int m = cfg.grid > 1 ? cfg.grid : 100;
    std::optional<Rational> lmin, lmax;
    if (!cfg.lmin_str.empty()) lmin = parse_rational(cfg.lmin_str);
    if (!cfg.lmax_str.empty()) lmax = parse_rational(cfg.lmax_str);
    std::vector<Rational> grid;
    for (int j = 1; j < m; ++j) {
        Rational lambda(j, m);
        if (lmin && lambda <= *lmin) continue;
        if (lmax && lambda >= *lmax) continue;
        grid.push_back(lambda);
    }
    SweepReport report = sweep_lambda(a, b, grid, make_budget(cfg));
    if (!report.z_independent)
        std::cerr << "sweep: warning: family tuples are not Z-independent\n";
    write_artifact(cfg, sweep_to_csv(report, cfg.decimal));
    return cfg.strict && report.undecided_fraction > 0 ? 3 : 0;
}

}  // namespace cli_detail

/// Dispatches one command. Returns the process exit code: 0 on success, 2 on
/// validation errors (thrown as pwc::Error by the callee), 3 when --strict
/// turns an UNDECIDED outcome into a failure.
inline int run(const RunConfig& cfg) {
    if (cfg.mode != "exact" && cfg.mode != "float")
        fail(errc::invalid_argument, "--mode must be exact or float");
    if (cfg.command == "map") return cli_detail::run_map(cfg);
    if (cfg.command == "orbit") return cli_detail::run_orbit(cfg);
    if (cfg.command == "classify") return cli_detail::run_classify(cfg);
    if (cfg.command == "tongues") return cli_detail::run_tongues(cfg);
    if (cfg.command == "rho") return cli_detail::run_rho(cfg);
    if (cfg.command == "connections") return cli_detail::run_connections(cfg);
    if (cfg.command == "entropy") return cli_detail::run_entropy(cfg);
    if (cfg.command == "boxdim") return cli_detail::run_boxdim(cfg);
    if (cfg.command == "sweep") return cli_detail::run_sweep(cfg);
    fail(errc::invalid_argument, "unknown command '" + cfg.command + "'");
}

/// run() wrapped with the error-to-exit-code policy used by main().
inline int run_guarded(const RunConfig& cfg) {
    try {
        return run(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pwc
