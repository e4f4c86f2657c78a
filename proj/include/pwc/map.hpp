#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "pwc/errors.hpp"
#include "pwc/scalar.hpp"

namespace pwc {

/// Branch indices are 1-based throughout, matching the reports emitted by
/// the CLI; entry j refers to branches[j-1].
using Itinerary = std::vector<int>;

template <ScalarType S>
struct MapSpec {
    std::vector<S> a;  // k+1 partition points, a.front()==0, a.back()==1
    std::vector<S> b;  // k intercepts, b[i] applies on [a[i], a[i+1])
    S lambda{};

    int k() const { return static_cast<int>(b.size()); }
};

/// One affine piece after the mod-1 refinement: x |-> lambda*x + delta on
/// [lo, hi), with delta = b[source_index-1] + wrap.
template <ScalarType S>
struct Branch {
    S lo{}, hi{};
    S delta{};
    int source_index = 0;  // 1-based index into the original b-tuple
    long wrap = 0;         // integer shift applied by the mod 1
};

template <ScalarType S>
struct PwMap {
    MapSpec<S> spec;
    std::vector<Branch<S>> branches;
    std::vector<S> singular;  // branch left endpoints; singular[0] == 0

    int branch_count() const { return static_cast<int>(branches.size()); }
    const S& lambda() const { return spec.lambda; }
};

template <ScalarType S>
struct SingularSet {
    int depth = 0;
    std::vector<S> points;  // sorted
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {

template <ScalarType S>
void validate_spec(const MapSpec<S>& spec) {
    if (spec.b.empty() || spec.a.size() != spec.b.size() + 1)
        fail(errc::non_monotone_partition, "partition must have k+1 points for k intercepts");
    if (spec.a.front() != 0)
        fail(errc::non_monotone_partition, "partition must start at 0");
    if (spec.a.back() != 1)
        fail(errc::non_monotone_partition, "partition must end at 1");
    for (size_t i = 0; i + 1 < spec.a.size(); ++i)
        if (!(spec.a[i] < spec.a[i + 1]))
            fail(errc::non_monotone_partition, "partition points must be strictly increasing");
    if (!(spec.lambda > 0 && spec.lambda < 1))
        fail(errc::lambda_out_of_range, "lambda must lie in (0,1)");
}

// floor of a scalar value; exact for rationals, direct for floats.
inline BigInt scalar_floor(const Rational& v) { return floor_int(v); }
inline BigInt scalar_floor(const Float& v) {
    return static_cast<BigInt>(boost::multiprecision::floor(v));
}

}  // namespace detail

/// Builds the mod-1 refinement of the a-partition. Within [a_{i-1}, a_i) the
/// lift F(x) = lambda*x + b_i has image of length < 1, so it crosses at most
/// one integer; the crossing point splits the interval. Degenerate (empty)
/// sub-branches are dropped and adjacent sub-branches with equal delta are
/// merged, so every interior singular point is a genuine discontinuity.
template <ScalarType S>
PwMap<S> build_map(const MapSpec<S>& spec) {
    detail::validate_spec(spec);
    const S& lam = spec.lambda;

    std::vector<Branch<S>> raw;
    for (int i = 1; i <= spec.k(); ++i) {
        const S& lo = spec.a[i - 1];
        const S& hi = spec.a[i];
        const S& b = spec.b[i - 1];
        S f_lo = lam * lo + b;
        BigInt m0 = detail::scalar_floor(f_lo);
        S m0s = scalar_from_rational<S>(Rational(m0));
        // crossing of the next integer, if it lands strictly inside [lo, hi)
        S cross = (m0s + 1 - b) / lam;
        long wrap = BigInt(-m0).convert_to<long>();
        if (cross < hi) {
            raw.push_back(Branch<S>{lo, cross, S(b - m0s), i, wrap});
            raw.push_back(Branch<S>{cross, hi, S(b - m0s - 1), i, wrap - 1});
            if (lam * hi + b > m0s + 2)
                fail(errc::branch_escapes_unit, "second integer crossing inside one interval");
        } else {
            raw.push_back(Branch<S>{lo, hi, S(b - m0s), i, wrap});
        }
    }

    // Merge continuation pieces: equal delta across a boundary means the map
    // is continuous there, so it is not a singular point.
    std::vector<Branch<S>> branches;
    for (auto& br : raw) {
        if (!branches.empty() && branches.back().delta == br.delta)
            branches.back().hi = br.hi;
        else
            branches.push_back(br);
    }

    PwMap<S> map{spec, std::move(branches), {}};
    map.singular.reserve(map.branches.size());
    for (auto& br : map.branches) {
        if (!(lam * br.lo + br.delta >= 0) || !(lam * br.hi + br.delta <= 1))
            fail(errc::branch_escapes_unit, "branch image escapes [0,1)");
        map.singular.push_back(br.lo);
    }
    return map;
}

/// Converts an exact map to its float shadow (used by the long-orbit engine
/// and the float CLI mode). Built by converting the exact map, so both modes
/// describe the same construction.
inline PwMap<Float> to_float_map(const PwMap<Rational>& map) {
    PwMap<Float> out;
    out.spec.lambda = to_float(map.spec.lambda);
    for (auto& v : map.spec.a) out.spec.a.push_back(to_float(v));
    for (auto& v : map.spec.b) out.spec.b.push_back(to_float(v));
    for (auto& br : map.branches)
        out.branches.push_back(Branch<Float>{to_float(br.lo), to_float(br.hi),
                                             to_float(br.delta), br.source_index, br.wrap});
    for (auto& s : map.singular) out.singular.push_back(to_float(s));
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// 1-based index of the branch whose half-open domain contains x.
/// In float mode, x closer than kEpsCmp to a singular point (other than the
/// one defining its own branch floor) raises PrecisionLoss rather than guess.
template <ScalarType S>
int branch_index(const PwMap<S>& map, const S& x) {
    if (!(x >= 0 && x < 1)) fail(errc::point_out_of_domain, "x outside [0,1)");
    auto it = std::upper_bound(map.singular.begin(), map.singular.end(), x);
    int idx = static_cast<int>(it - map.singular.begin());  // 1-based already
    if constexpr (!is_exact_v<S>) {
        // Only interior singular points are ambiguous; the ends of [0,1)
        // have no branch on the other side.
        const auto& br = map.branches[static_cast<size_t>(idx - 1)];
        if (br.lo != 0 && x != br.lo && x - br.lo < kEpsCmp)
            fail(errc::precision_loss, "point within eps_cmp of a branch boundary");
        if (br.hi != 1 && br.hi - x < kEpsCmp)
            fail(errc::precision_loss, "point within eps_cmp of a branch boundary");
    }
    return idx;
}

template <ScalarType S>
S eval(const PwMap<S>& map, const S& x) {
    int j = branch_index(map, x);
    const auto& br = map.branches[static_cast<size_t>(j - 1)];
    return map.lambda() * x + br.delta;
}

template <ScalarType S>
Itinerary itinerary_of(const PwMap<S>& map, const S& x, int n) {
    if (n < 1) fail(errc::bad_range, "itinerary length must be >= 1");
    Itinerary out;
    out.reserve(static_cast<size_t>(n));
    S cur = x;
    for (int t = 0; t < n; ++t) {
        int j = branch_index(map, cur);
        out.push_back(j);
        cur = map.lambda() * cur + map.branches[static_cast<size_t>(j - 1)].delta;
    }
    return out;
}

/// H_omega(lambda): the affine offset of the branch composition along omega,
/// so the n-th iterate satisfies f^n(x) = lambda^n x + H_omega(lambda).
template <ScalarType S>
S offset_polynomial(const PwMap<S>& map, const Itinerary& omega) {
    if (omega.empty()) fail(errc::empty_itinerary, "offset of empty word");
    S h = S(0);
    for (int entry : omega) {
        if (entry < 1 || entry > map.branch_count())
            fail(errc::bad_range, "itinerary entry out of range");
        h = map.lambda() * h + map.branches[static_cast<size_t>(entry - 1)].delta;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Singular combinatorics
// ---------------------------------------------------------------------------

/// S^(n): preimages of the singular set accumulated to depth n. Exact
/// preimage solving; in float mode a candidate preimage landing within
/// kEpsCmp of a domain endpoint raises PrecisionLoss.
template <ScalarType S>
SingularSet<S> singular_points(const PwMap<S>& map, int n) {
    if (n < 1) fail(errc::bad_range, "singular depth must be >= 1");
    std::set<S> acc(map.singular.begin(), map.singular.end());
    std::vector<S> level(map.singular.begin(), map.singular.end());
    for (int step = 1; step < n && !level.empty(); ++step) {
        std::vector<S> next;
        for (const S& target : level) {
            for (const auto& br : map.branches) {
                S x = (target - br.delta) / map.lambda();
                if (x >= br.lo && x < br.hi) {
                    if constexpr (!is_exact_v<S>) {
                        // no one-sided convention rescues a preimage this
                        // close to an endpoint; the true solution could sit
                        // on either side
                        if (x - br.lo < kEpsCmp || br.hi - x < kEpsCmp)
                            fail(errc::precision_loss,
                                 "preimage within eps_cmp of a branch endpoint");
                    }
                    next.push_back(x);
                }
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        size_t before = acc.size();
        acc.insert(next.begin(), next.end());
        if (acc.size() == before) break;  // preimage closure reached
        level = std::move(next);
    }
    SingularSet<S> out;
    out.depth = n;
    out.points.assign(acc.begin(), acc.end());
    return out;
}

/// alpha_n: the number of distinct order-n itineraries. Right continuity
/// makes every singular point share the itinerary of its right neighbour, so
/// this equals the number of connected components of [0,1) \ S^(n), which is
/// |S^(n)| because 0 is always singular.
template <ScalarType S>
long count_itineraries(const PwMap<S>& map, int n) {
    return static_cast<long>(singular_points(map, n).points.size());
}

/// Midpoints of the connected components of [0,1) \ S^(depth); the orbit
/// seeds used by the periodic-orbit search.
template <ScalarType S>
std::vector<S> component_midpoints(const PwMap<S>& map, int depth) {
    SingularSet<S> sing = singular_points(map, depth);
    std::vector<S> mids;
    mids.reserve(sing.points.size());
    for (size_t i = 0; i < sing.points.size(); ++i) {
        const S& lo = sing.points[i];
        S hi = (i + 1 < sing.points.size()) ? sing.points[i + 1] : S(1);
        mids.push_back((lo + hi) / 2);
    }
    return mids;
}

// ---------------------------------------------------------------------------
// Z-independence
// ---------------------------------------------------------------------------

/// Tests a_i - b_j not in Z over {1..k}^2 with the convention that the
/// a-tuple is (a_1, ..., a_{k-1}, 1). Exact arithmetic only.
inline bool is_Z_independent(const std::vector<Rational>& a_tuple,
                             const std::vector<Rational>& b_tuple) {
    if (a_tuple.size() != b_tuple.size())
        fail(errc::bad_range, "Z-independence needs tuples of equal length");
    for (const auto& x : a_tuple)
        for (const auto& y : b_tuple)
            if (is_integer(Rational(x - y))) return false;
    return true;
}

/// Convenience: the Z-independence tuples of a map spec (drops a_0 = 0,
/// keeps a_k = 1).
inline std::pair<std::vector<Rational>, std::vector<Rational>> z_independence_tuples(
    const MapSpec<Rational>& spec) {
    std::vector<Rational> a_tuple(spec.a.begin() + 1, spec.a.end());
    return {a_tuple, spec.b};
}

}  // namespace pwc
