#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pwc/errors.hpp"
#include "pwc/map.hpp"
#include "pwc/orbit.hpp"
#include "pwc/parallel.hpp"
#include "pwc/scalar.hpp"

namespace pwc {

// ---------------------------------------------------------------------------
// Singular entropy profile
// ---------------------------------------------------------------------------

struct EntropyRow {
    int n = 0;
    long alpha = 0;   // number of order-n itineraries
    double entropy = 0;  // log(alpha)/n
};

struct EntropyProfile {
    std::vector<EntropyRow> rows;
};

/// alpha_n for n = 1..n_max via incremental preimage accumulation of the
/// singular set (alpha_n = |S^(n)|; see count_itineraries).
template <ScalarType S>
EntropyProfile entropy_profile(const PwMap<S>& map, int n_max) {
    if (n_max < 2) fail(errc::bad_range, "entropy profile needs n_max >= 2");
    EntropyProfile profile;
    std::set<S> acc(map.singular.begin(), map.singular.end());
    std::vector<S> level(map.singular.begin(), map.singular.end());
    bool stable = false;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1 && !stable) {
            std::vector<S> next;
            for (const S& target : level)
                for (const auto& br : map.branches) {
                    S x = (target - br.delta) / map.lambda();
                    if (x >= br.lo && x < br.hi) {
                        if constexpr (!is_exact_v<S>) {
                            if (x - br.lo < kEpsCmp || br.hi - x < kEpsCmp)
                                fail(errc::precision_loss,
                                     "preimage within eps_cmp of a branch endpoint");
                        }
                        next.push_back(x);
                    }
                }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            size_t before = acc.size();
            acc.insert(next.begin(), next.end());
            stable = acc.size() == before;
            level = std::move(next);
        }
        long alpha = static_cast<long>(acc.size());
        profile.rows.push_back(
            EntropyRow{n, alpha, std::log(static_cast<double>(alpha)) / static_cast<double>(n)});
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Omega-limit sampling
// ---------------------------------------------------------------------------

/// Union over seeds of the orbit points with indices in
/// [T_transient, T_transient + T_sample), tracked in float with enclosures;
/// PrecisionLoss propagates if an enclosure stops separating from a singular
/// point inside the sampling window.
template <ScalarType S>
std::vector<Float> omega_limit_sample(const PwMap<S>& map, const std::vector<S>& seeds,
                                      long t_transient, long t_sample) {
    if (t_transient < 1 || t_sample < 1)
        fail(errc::bad_range, "transient and sample lengths must be >= 1");
    Shadow sh = make_shadow(map);
    std::vector<std::vector<Float>> parts(seeds.size());
    parallel_for(seeds.size(), [&](size_t i) {
        OrbitTracker<S> tracker(map, sh, seeds[i]);
        for (long t = 0; t < t_transient + t_sample; ++t) {
            if (tracker.step() == TrackStatus::unresolved)
                fail(errc::precision_loss, "orbit enclosure straddles a singular point");
            if (tracker.steps() >= t_transient)
                parts[i].push_back((tracker.lo() + tracker.hi()) / 2);
        }
    });
    std::vector<Float> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Box-counting dimension estimate
// ---------------------------------------------------------------------------

struct BoxCountRow {
    Float epsilon;
    long count = 0;
};

struct BoxCountProfile {
    std::vector<BoxCountRow> rows;
    double slope = 0;  // least-squares slope of log N over log(1/eps), finest window
};

/// N(eps) by eps-aligned bucket counting anchored at 0; the slope is fitted
/// over the finest two decades of the ladder. DegenerateFit when the fit
/// window holds fewer than two distinct epsilons.
inline BoxCountProfile box_dimension_estimate(const std::vector<Float>& points,
                                              const std::vector<Float>& eps_list) {
    if (eps_list.size() < 2) fail(errc::bad_range, "need at least two epsilons");
    for (size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            fail(errc::bad_range, "epsilons must be strictly decreasing");

    BoxCountProfile profile;
    for (const Float& eps : eps_list) {
        if (!(eps > 0)) fail(errc::bad_range, "epsilon must be positive");
        std::set<std::int64_t> buckets;
        for (const Float& x : points)
            buckets.insert(static_cast<std::int64_t>(boost::multiprecision::floor(x / eps)));
        profile.rows.push_back(BoxCountRow{eps, static_cast<long>(buckets.size())});
    }

    const Float eps_min = profile.rows.back().epsilon;
    std::vector<std::pair<double, double>> fit;  // (log 1/eps, log N)
    for (const auto& row : profile.rows)
        if (row.epsilon <= eps_min * 100)
            fit.emplace_back(-std::log(to_double(row.epsilon)),
                             std::log(static_cast<double>(row.count)));
    std::set<double> distinct;
    for (auto& [x, y] : fit) distinct.insert(x);
    if (distinct.size() < 2) fail(errc::degenerate_fit, "fit window has fewer than two epsilons");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : fit) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(fit.size());
    profile.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return profile;
}

// ---------------------------------------------------------------------------
// Lambda sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
    Rational lambda;
    Verdict verdict = Verdict::undecided;
    int n_cycles = 0;
    int max_period = 0;
    std::string undecided_reason;  // empty unless verdict == undecided
};

struct SweepReport {
    std::vector<Rational> grid;
    std::vector<SweepRow> rows;
    Rational undecided_fraction;
    bool z_independent = true;  // hypothesis check; a warning flag, not a gate
};

/// Classifies the family (a, b) at every grid slope. Grid cells run
/// independently; the report order is the sorted grid.
inline SweepReport sweep_lambda(const std::vector<Rational>& a_partition,
                                const std::vector<Rational>& b_tuple,
                                const std::vector<Rational>& lambda_grid,
                                const Budget& budget = {}) {
    SweepReport report;
    report.grid = lambda_grid;
    std::sort(report.grid.begin(), report.grid.end());
    report.grid.erase(std::unique(report.grid.begin(), report.grid.end()), report.grid.end());

    {
        MapSpec<Rational> probe{a_partition, b_tuple, Rational(1, 2)};
        detail::validate_spec(probe);
        auto [ta, tb] = z_independence_tuples(probe);
        report.z_independent = is_Z_independent(ta, tb);
    }

    report.rows.resize(report.grid.size());
    parallel_for(report.grid.size(), [&](size_t i) {
        MapSpec<Rational> spec{a_partition, b_tuple, report.grid[i]};
        PwMap<Rational> map = build_map(spec);
        Classification cls = classify_map(map, budget);
        SweepRow row;
        row.lambda = report.grid[i];
        row.verdict = cls.verdict;
        row.n_cycles = static_cast<int>(cls.cycles.size());
        for (const auto& c : cls.cycles) row.max_period = std::max(row.max_period, c.period);
        if (cls.verdict == Verdict::undecided)
            row.undecided_reason = cls.precision_unresolved ? "precision-unresolved"
                                                            : "budget-exhausted";
        report.rows[i] = std::move(row);
    });

    long undecided = 0;
    for (const auto& row : report.rows)
        if (row.verdict == Verdict::undecided) ++undecided;
    report.undecided_fraction = report.rows.empty()
                                    ? Rational(0)
                                    : Rational(undecided, static_cast<long>(report.rows.size()));
    return report;
}

}  // namespace pwc
