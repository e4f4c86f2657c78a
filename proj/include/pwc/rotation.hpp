#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "pwc/errors.hpp"
#include "pwc/map.hpp"
#include "pwc/orbit.hpp"
#include "pwc/parallel.hpp"
#include "pwc/scalar.hpp"

namespace pwc {

/// Parameters of a contracted rotation x |-> lambda x + b (mod 1), valid on
/// the open triangle 0 < 1-lambda < b < 1; c = (1-b)/lambda is the wrap point.
struct ContractedRotationSpec {
    Rational lambda;
    Rational b;
    Rational c;
};

inline ContractedRotationSpec contracted_rotation_spec(const Rational& lambda, const Rational& b) {
    if (!(lambda > 0 && lambda < 1 && b > 1 - lambda && b < 1))
        fail(errc::parameter_outside_triangle, "need 0 < 1-lambda < b < 1");
    return ContractedRotationSpec{lambda, b, (1 - b) / lambda};
}

/// The contracted rotation as a 2-branch piecewise lambda-affine map, split
/// at c = (1-b)/lambda.
inline PwMap<Rational> contracted_rotation(const Rational& lambda, const Rational& b) {
    (void)contracted_rotation_spec(lambda, b);
    MapSpec<Rational> spec;
    spec.a = {Rational(0), Rational(1)};
    spec.b = {b};
    spec.lambda = lambda;
    return build_map(spec);
}

/// A rational rotation-number tongue: the closed b-interval where
/// rho(R_{lambda,b}) = p/q at this lambda.
struct Tongue {
    long p = 0, q = 0;
    Rational lambda;
    Rational b_lo, b_hi;
};

/// S(lambda, p/q) = 1 + sum_{k=1}^{q-2} (floor((k+1)p/q) - floor(kp/q)) lambda^k;
/// the empty sum makes S = 1 at q = 2.
inline Rational S_coefficient(const Rational& lambda, long p, long q) {
    if (q < 2 || p < 1 || p >= q) fail(errc::bad_range, "need 1 <= p < q, q >= 2");
    if (std::gcd(p, q) != 1) fail(errc::not_coprime, "p/q must be in lowest terms");
    Rational s = 1;
    Rational lam_k = 1;
    for (long k = 1; k <= q - 2; ++k) {
        lam_k *= lambda;
        long step = (k + 1) * p / q - k * p / q;
        if (step != 0) s += Rational(step) * lam_k;
    }
    return s;
}

/// The exact tongue interval in closed form:
/// b in [(1-lambda) S / (1-lambda^q), (1-lambda)(S + lambda^{q-1} - lambda^q)/(1-lambda^q)].
inline Tongue tongue_interval(const Rational& lambda, long p, long q) {
    if (!(lambda > 0 && lambda < 1)) fail(errc::lambda_out_of_range, "lambda must be in (0,1)");
    Rational s = S_coefficient(lambda, p, q);
    Rational lam_q = pow_rational(lambda, static_cast<int>(q));
    Rational lam_qm1 = pow_rational(lambda, static_cast<int>(q - 1));
    Rational scale = (1 - lambda) / (1 - lam_q);
    Tongue t;
    t.p = p;
    t.q = q;
    t.lambda = lambda;
    t.b_lo = scale * s;
    t.b_hi = scale * (s + lam_qm1 - lam_q);
    return t;
}

// ---------------------------------------------------------------------------
// Rotation number
// ---------------------------------------------------------------------------

enum class RotationKind { exact_rational, estimate };

struct RotationResult {
    RotationKind kind = RotationKind::estimate;
    long p = 0, q = 0;     // set for exact_rational
    double value = 0;      // numeric value in both cases
    long n_steps = 0;      // estimator sample length
    // running wrap fractions at geometric checkpoints, for convergence
    // diagnostics (no error bar is claimed)
    std::vector<std::pair<long, double>> wrap_fraction_history;
};

/// Rotation number of R_{lambda,b}. If classification certifies a cycle, the
/// rotation number is exactly (wraps per period)/(period). Otherwise returns
/// the wrap-fraction estimate after budget.t_max steps.
inline RotationResult rotation_number(const ContractedRotationSpec& spec,
                                      const Budget& budget = {}) {
    PwMap<Rational> map = contracted_rotation(spec.lambda, spec.b);
    Classification cls = classify_map(map, budget);
    RotationResult res;
    if (!cls.cycles.empty()) {
        const CertifiedCycle& c = cls.cycles.front();
        long wraps = 0;
        for (long w : c.wraps) wraps += -w;  // each wrap of the lift is -1
        long g = std::gcd(wraps, static_cast<long>(c.period));
        res.kind = RotationKind::exact_rational;
        res.p = wraps / g;
        res.q = c.period / g;
        res.value = static_cast<double>(res.p) / static_cast<double>(res.q);
        return res;
    }
    // estimator: fraction of branch-2 visits along a tracked orbit of 0
    Shadow sh = make_shadow(map);
    OrbitTracker<Rational> tracker(map, sh, Rational(0));
    long wraps = 0;
    long next_checkpoint = 8;
    for (long t = 0; t < budget.t_max; ++t) {
        if (tracker.step() == TrackStatus::unresolved) break;
        if (tracker.wraps().back() != 0) ++wraps;
        if (tracker.steps() == next_checkpoint) {
            res.wrap_fraction_history.emplace_back(
                tracker.steps(), static_cast<double>(wraps) / static_cast<double>(tracker.steps()));
            next_checkpoint *= 2;
        }
    }
    res.kind = RotationKind::estimate;
    res.n_steps = tracker.steps();
    res.value = res.n_steps > 0 ? static_cast<double>(wraps) / static_cast<double>(res.n_steps) : 0;
    if (res.wrap_fraction_history.empty() || res.wrap_fraction_history.back().first != res.n_steps)
        res.wrap_fraction_history.emplace_back(res.n_steps, res.value);
    return res;
}

inline RotationResult rotation_number(const Rational& lambda, const Rational& b,
                                      const Budget& budget = {}) {
    return rotation_number(contracted_rotation_spec(lambda, b), budget);
}

// ---------------------------------------------------------------------------
// Tongue atlas
// ---------------------------------------------------------------------------

/// All tongues with denominator q <= q_max at each grid lambda, clipped to
/// the parameter triangle and ordered by (lambda, p/q).
inline std::vector<Tongue> tongue_atlas(int q_max, const std::vector<Rational>& lambda_grid) {
    if (q_max < 2) fail(errc::bad_range, "q_max must be >= 2");
    std::vector<std::pair<long, long>> fractions;
    for (long q = 2; q <= q_max; ++q)
        for (long p = 1; p < q; ++p)
            if (std::gcd(p, q) == 1) fractions.emplace_back(p, q);
    std::sort(fractions.begin(), fractions.end(),
              [](const auto& f, const auto& g) { return f.first * g.second < g.first * f.second; });

    std::vector<Rational> grid = lambda_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<std::vector<Tongue>> per_lambda(grid.size());
    parallel_for(grid.size(), [&](size_t i) {
        const Rational& lambda = grid[i];
        if (!(lambda > 0 && lambda < 1)) fail(errc::lambda_out_of_range, "grid lambda outside (0,1)");
        for (auto [p, q] : fractions) {
            Tongue t = tongue_interval(lambda, p, q);
            // clip to the open triangle 1-lambda < b < 1
            if (t.b_hi <= 1 - lambda || t.b_lo >= 1) continue;
            if (t.b_lo < 1 - lambda) t.b_lo = 1 - lambda;
            if (t.b_hi > 1) t.b_hi = 1;
            per_lambda[i].push_back(std::move(t));
        }
    });

    std::vector<Tongue> out;
    for (auto& rows : per_lambda)
        for (auto& t : rows) out.push_back(std::move(t));
    return out;
}

}  // namespace pwc
