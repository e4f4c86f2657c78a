#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pwc/connection.hpp"
#include "pwc/errors.hpp"
#include "pwc/map.hpp"
#include "pwc/metrics.hpp"
#include "pwc/orbit.hpp"
#include "pwc/rotation.hpp"
#include "pwc/scalar.hpp"

namespace pwc {

using Json = nlohmann::ordered_json;

/// Fixed-format double rendering so artifacts are byte-stable.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Map-spec files
// ---------------------------------------------------------------------------

/// Parses {"a": [...], "b": [...], "lambda": "..."}. The a-list may either
/// omit or include the trailing 1; scalars are "p/q" or decimal literals,
/// both read exactly.
inline MapSpec<Rational> parse_map_spec(const Json& j) {
    if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("lambda"))
        fail(errc::invalid_argument, "map spec needs keys a, b, lambda");
    MapSpec<Rational> spec;
    auto read_scalar = [](const Json& v) {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
        fail(errc::invalid_argument, "scalars must be strings or integers");
    };
    for (const auto& v : j.at("a")) spec.a.push_back(read_scalar(v));
    for (const auto& v : j.at("b")) spec.b.push_back(read_scalar(v));
    spec.lambda = read_scalar(j.at("lambda"));
    if (spec.a.size() == spec.b.size()) spec.a.push_back(Rational(1));
    return spec;
}

inline MapSpec<Rational> load_map_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open map spec '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("map spec is not valid JSON: ") + e.what());
    }
    return parse_map_spec(j);
}

// ---------------------------------------------------------------------------
// JSON artifacts
// ---------------------------------------------------------------------------

template <ScalarType S>
Json map_to_json(const PwMap<S>& map, bool decimal = false) {
    Json j;
    j["lambda"] = render_scalar(map.spec.lambda, decimal);
    j["a"] = Json::array();
    for (const auto& v : map.spec.a) j["a"].push_back(render_scalar(v, decimal));
    j["b"] = Json::array();
    for (const auto& v : map.spec.b) j["b"].push_back(render_scalar(v, decimal));
    j["branches"] = Json::array();
    for (const auto& br : map.branches) {
        Json e;
        e["lo"] = render_scalar(br.lo, decimal);
        e["hi"] = render_scalar(br.hi, decimal);
        e["delta"] = render_scalar(br.delta, decimal);
        e["wrap"] = br.wrap;
        e["source_index"] = br.source_index;
        j["branches"].push_back(std::move(e));
    }
    return j;
}

inline Json classification_to_json(const Classification& cls, bool decimal = false) {
    Json j;
    j["verdict"] = verdict_name(cls.verdict);
    j["cycles"] = Json::array();
    for (const auto& c : cls.cycles) {
        Json e;
        e["period"] = c.period;
        e["point"] = render_scalar(c.point, decimal);
        e["omega"] = c.omega;
        e["trap"] = Json::array({render_scalar(c.trap_lo, decimal),
                                 render_scalar(c.trap_hi, decimal)});
        j["cycles"].push_back(std::move(e));
    }
    j["assignment"] = Json::object();
    for (const auto& [point, id] : cls.assignment) {
        if (id)
            j["assignment"][render_scalar(point, decimal)] = *id;
        else
            j["assignment"][render_scalar(point, decimal)] = nullptr;
    }
    Json bu;
    bu["steps"] = cls.budget_used.steps;
    bu["exact_steps"] = cls.budget_used.exact_steps;
    bu["candidates"] = cls.budget_used.candidates;
    bu["seeds"] = cls.budget_used.seeds;
    bu["unresolved_seeds"] = cls.budget_used.unresolved_seeds;
    bu["p_max"] = cls.budget_used.p_max;
    bu["depth"] = cls.budget_used.depth;
    j["budget_used"] = std::move(bu);
    return j;
}

inline Json connection_to_json(const std::optional<Connection>& conn, bool decimal = false) {
    Json j;
    j["found"] = conn.has_value();
    if (conn) {
        j["order"] = conn->order;
        j["omega"] = conn->omega;
        j["x"] = render_scalar(conn->x, decimal);
        j["y"] = render_scalar(conn->y, decimal);
    }
    return j;
}

template <ScalarType S>
Json orbit_to_json(const OrbitRecord<S>& rec, bool decimal = false) {
    Json j;
    j["start"] = render_scalar(rec.start, decimal);
    j["points"] = Json::array();
    for (const auto& p : rec.points) j["points"].push_back(render_scalar(p, decimal));
    j["itinerary"] = rec.itinerary;
    j["wraps"] = rec.wraps;
    if (!rec.enclosure_lo.empty()) {
        j["enclosure_lo"] = Json::array();
        j["enclosure_hi"] = Json::array();
        for (size_t i = 0; i < rec.enclosure_lo.size(); ++i) {
            j["enclosure_lo"].push_back(to_decimal_string(rec.enclosure_lo[i]));
            j["enclosure_hi"].push_back(to_decimal_string(rec.enclosure_hi[i]));
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// CSV artifacts (every table carries a header row; exact scalars render as
// num/den unless the decimal flag is set)
// ---------------------------------------------------------------------------

template <ScalarType S>
std::string orbit_to_csv(const OrbitRecord<S>& rec, bool decimal = false) {
    std::ostringstream os;
    os << "t,x,branch,wrap\n";
    for (size_t t = 0; t < rec.points.size(); ++t) {
        os << t << ',' << render_scalar(rec.points[t], decimal) << ',';
        if (t < rec.itinerary.size())
            os << rec.itinerary[t] << ',' << rec.wraps[t];
        else
            os << ',';
        os << '\n';
    }
    return os.str();
}

inline std::string atlas_to_csv(const std::vector<Tongue>& atlas, bool decimal = false) {
    std::ostringstream os;
    os << "lambda,p,q,b_lo,b_hi\n";
    for (const auto& t : atlas)
        os << render_scalar(t.lambda, decimal) << ',' << t.p << ',' << t.q << ','
           << render_scalar(t.b_lo, decimal) << ',' << render_scalar(t.b_hi, decimal) << '\n';
    return os.str();
}

inline std::string rotation_to_csv(const RotationResult& res) {
    std::ostringstream os;
    os << "value,kind,steps,cesaro_prev,cesaro_last\n";
    if (res.kind == RotationKind::exact_rational) {
        os << res.p << '/' << res.q << ",EXACT,,,\n";
    } else {
        const auto& h = res.wrap_fraction_history;
        std::string prev = h.size() >= 2 ? format_double(h[h.size() - 2].second) : "";
        std::string last = h.empty() ? "" : format_double(h.back().second);
        os << format_double(res.value) << ",ESTIMATE," << res.n_steps << ',' << prev << ',' << last
           << '\n';
    }
    return os.str();
}

inline std::string entropy_to_csv(const EntropyProfile& profile) {
    std::ostringstream os;
    os << "n,alpha_n,entropy_n\n";
    for (const auto& row : profile.rows)
        os << row.n << ',' << row.alpha << ',' << format_double(row.entropy) << '\n';
    return os.str();
}

inline std::string boxdim_to_csv(const BoxCountProfile& profile) {
    std::ostringstream os;
    os << "epsilon,N\n";
    for (const auto& row : profile.rows)
        os << to_decimal_string(row.epsilon, 17) << ',' << row.count << '\n';
    return os.str();
}

inline std::string sweep_to_csv(const SweepReport& report, bool decimal = false) {
    std::ostringstream os;
    os << "lambda,verdict,n_cycles,max_period,undecided_reason\n";
    for (const auto& row : report.rows)
        os << render_scalar(row.lambda, decimal) << ',' << verdict_name(row.verdict) << ','
           << row.n_cycles << ',' << row.max_period << ',' << row.undecided_reason << '\n';
    return os.str();
}

inline std::string roots_to_csv(const std::vector<RootBracket>& roots, bool decimal = false) {
    std::ostringstream os;
    os << "lo,hi,exact\n";
    for (const auto& r : roots) {
        os << render_scalar(r.lo, decimal) << ',' << render_scalar(r.hi, decimal) << ',';
        if (r.exact) os << render_scalar(*r.exact, decimal);
        os << '\n';
    }
    return os.str();
}

inline std::string v_set_to_csv(const std::vector<Rational>& vs, bool decimal = false) {
    std::ostringstream os;
    os << "lambda\n";
    for (const auto& v : vs) os << render_scalar(v, decimal) << '\n';
    return os.str();
}

}  // namespace pwc
