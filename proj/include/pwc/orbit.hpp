#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "pwc/connection.hpp"
#include "pwc/errors.hpp"
#include "pwc/map.hpp"
#include "pwc/parallel.hpp"
#include "pwc/scalar.hpp"

namespace pwc {

struct Budget {
    long t_max = 100000;  // orbit steps per seed
    int p_max = 64;       // longest candidate period
    int depth = 8;        // singular-set depth for orbit seeding
};

/// Total exact-arithmetic steps an orbit may consume when its enclosure
/// cannot separate from a singular point.
inline constexpr long kMaxExactSteps = 200;

/// An escalation replays the itinerary from the last exact checkpoint; this
/// caps how far back that replay may reach (denominators grow with every
/// replayed step).
inline constexpr long kEscalationHorizon = 4096;

template <ScalarType S>
struct OrbitRecord {
    S start{};
    std::vector<S> points;  // length T+1
    Itinerary itinerary;    // length T; entry t is the branch containing points[t]
    std::vector<long> wraps;  // length T; integer shift applied at step t
    std::vector<Float> enclosure_lo, enclosure_hi;  // float mode only
};

// ---------------------------------------------------------------------------
// Float shadow of a map: directed bounds for every constant the orbit loop
// touches, so enclosure arithmetic never consults exact values on the fast
// path.
// ---------------------------------------------------------------------------

struct Shadow {
    Float lam_dn, lam_up;
    std::vector<Float> delta_dn, delta_up;
    std::vector<Float> sing_dn, sing_up;  // per singular point
};

namespace detail {

inline std::pair<Float, Float> directed_bounds(const Rational& v) {
    return {float_below(v), float_above(v)};
}
inline std::pair<Float, Float> directed_bounds(const Float& v) { return {v, v}; }

}  // namespace detail

template <ScalarType S>
Shadow make_shadow(const PwMap<S>& map) {
    Shadow sh;
    std::tie(sh.lam_dn, sh.lam_up) = detail::directed_bounds(map.lambda());
    for (const auto& br : map.branches) {
        auto [d, u] = detail::directed_bounds(br.delta);
        sh.delta_dn.push_back(d);
        sh.delta_up.push_back(u);
    }
    for (const auto& s : map.singular) {
        auto [d, u] = detail::directed_bounds(s);
        sh.sing_dn.push_back(d);
        sh.sing_up.push_back(u);
    }
    return sh;
}

// ---------------------------------------------------------------------------
// Orbit tracker: maintains a true enclosure of the orbit of an exactly known
// starting point. While the enclosure determines the branch, steps run in
// float interval arithmetic; when it straddles a singular point, the orbit
// escalates to exact arithmetic for that step (replaying the itinerary from
// the last exact checkpoint), up to kMaxExactSteps per orbit.
// ---------------------------------------------------------------------------

enum class TrackStatus { ok, unresolved };

template <ScalarType S>
class OrbitTracker {
public:
    OrbitTracker(const PwMap<S>& map, const Shadow& shadow, const S& start)
        : map_(map), sh_(shadow), anchor_(start) {
        if (!(start >= 0 && start < 1)) fail(errc::point_out_of_domain, "orbit start outside [0,1)");
        auto [d, u] = detail::directed_bounds(start);
        lo_ = d;
        hi_ = u;
        if (lo_ < 0) lo_ = 0;
    }

    TrackStatus step() {
        int j = locate_branch();
        if (j < 0) {
            if constexpr (is_exact_v<S>) {
                if (!exact_step()) {
                    unresolved_ = true;
                    return TrackStatus::unresolved;
                }
                return TrackStatus::ok;
            } else {
                unresolved_ = true;
                return TrackStatus::unresolved;
            }
        }
        // fixed absolute inflation: every orbit value sits in (-1, 2), so a
        // 2^-105 pad dominates the rounding error of one multiply-add
        static const Float kPad = boost::multiprecision::ldexp(Float(1), -105);
        const size_t bj = static_cast<size_t>(j);
        lo_ = sh_.lam_dn * lo_ + sh_.delta_dn[bj] - kPad;
        hi_ = sh_.lam_up * hi_ + sh_.delta_up[bj] + kPad;
        if (lo_ < 0) lo_ = 0;
        itinerary_.push_back(j + 1);
        wraps_.push_back(map_.branches[bj].wrap);
        ++t_;
        return TrackStatus::ok;
    }

    const Float& lo() const { return lo_; }
    const Float& hi() const { return hi_; }
    long steps() const { return t_; }
    const Itinerary& itinerary() const { return itinerary_; }
    const std::vector<long>& wraps() const { return wraps_; }
    long exact_steps_used() const { return exact_steps_; }
    bool unresolved() const { return unresolved_; }

private:
    // 0-based branch index when the enclosure certainly lies in one branch
    // domain, -1 otherwise.
    int locate_branch() {
        const auto& up = sh_.sing_up;
        auto it = std::upper_bound(up.begin(), up.end(), lo_);
        int j = static_cast<int>(it - up.begin()) - 1;
        if (j >= 0) {
            size_t nj = static_cast<size_t>(j) + 1;
            bool inside = nj < sh_.sing_dn.size() ? hi_ < sh_.sing_dn[nj] : hi_ < 1;
            if (inside) return j;
        }
        if constexpr (is_exact_v<S>) {
            // The float bounds are inconclusive within a few ulps; decide
            // with exact comparisons against the enclosure endpoints.
            Rational lo_r = to_rational_exact(lo_);
            if (lo_r < 0) lo_r = 0;
            Rational hi_r = to_rational_exact(hi_);
            auto eit = std::upper_bound(map_.singular.begin(), map_.singular.end(), lo_r);
            int ej = static_cast<int>(eit - map_.singular.begin()) - 1;
            if (ej >= 0) {
                const auto& br = map_.branches[static_cast<size_t>(ej)];
                if (hi_r < br.hi) return ej;
            }
        }
        return -1;
    }

    // One exact step: recover the exact current point by replaying the word
    // since the last checkpoint, take the branch exactly, re-enclose.
    bool exact_step() {
        if (exact_steps_ >= kMaxExactSteps) return false;
        if (t_ - anchor_t_ > kEscalationHorizon) return false;
        Rational x = anchor_;
        for (long s = anchor_t_; s < t_; ++s) {
            const auto& br = map_.branches[static_cast<size_t>(itinerary_[static_cast<size_t>(s)] - 1)];
            x = map_.lambda() * x + br.delta;
        }
        int j = branch_index(map_, x);
        const auto& br = map_.branches[static_cast<size_t>(j - 1)];
        x = map_.lambda() * x + br.delta;
        itinerary_.push_back(j);
        wraps_.push_back(br.wrap);
        ++t_;
        ++exact_steps_;
        anchor_ = x;
        anchor_t_ = t_;
        lo_ = float_below(x);
        hi_ = float_above(x);
        if (lo_ < 0) lo_ = 0;
        return true;
    }

    const PwMap<S>& map_;
    const Shadow& sh_;
    Float lo_{}, hi_{};
    long t_ = 0;
    Itinerary itinerary_;
    std::vector<long> wraps_;
    S anchor_;  // exact checkpoint (only consulted for S == Rational)
    long anchor_t_ = 0;
    long exact_steps_ = 0;
    bool unresolved_ = false;
};

// ---------------------------------------------------------------------------
// iterate_orbit
// ---------------------------------------------------------------------------

template <ScalarType S>
OrbitRecord<S> iterate_orbit(const PwMap<S>& map, const S& x, long T) {
    if (T < 1) fail(errc::bad_range, "orbit length must be >= 1");
    OrbitRecord<S> rec;
    rec.start = x;
    if constexpr (is_exact_v<S>) {
        rec.points.push_back(x);
        S cur = x;
        for (long t = 0; t < T; ++t) {
            int j = branch_index(map, cur);
            const auto& br = map.branches[static_cast<size_t>(j - 1)];
            cur = map.lambda() * cur + br.delta;
            rec.itinerary.push_back(j);
            rec.wraps.push_back(br.wrap);
            rec.points.push_back(cur);
        }
    } else {
        Shadow sh = make_shadow(map);
        OrbitTracker<S> tracker(map, sh, x);
        rec.points.push_back(x);
        rec.enclosure_lo.push_back(tracker.lo());
        rec.enclosure_hi.push_back(tracker.hi());
        for (long t = 0; t < T; ++t) {
            if (tracker.step() == TrackStatus::unresolved)
                fail(errc::precision_loss, "orbit enclosure straddles a singular point");
            rec.points.push_back((tracker.lo() + tracker.hi()) / 2);
            rec.enclosure_lo.push_back(tracker.lo());
            rec.enclosure_hi.push_back(tracker.hi());
        }
        rec.itinerary = tracker.itinerary();
        rec.wraps = tracker.wraps();
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Maximal itinerary interval and cycle certification
// ---------------------------------------------------------------------------

struct HalfOpenInterval {
    Rational lo, hi;  // [lo, hi)
};

/// The maximal half-open interval of points whose order-p itinerary equals
/// omega, by exact backward intersection of branch domains; nullopt when no
/// point realizes omega.
inline std::optional<HalfOpenInterval> maximal_itinerary_interval(const PwMap<Rational>& map,
                                                                  const Itinerary& omega) {
    if (omega.empty()) fail(errc::empty_itinerary, "itinerary interval of empty word");
    for (int e : omega)
        if (e < 1 || e > map.branch_count()) fail(errc::bad_range, "itinerary entry out of range");

    const size_t p = omega.size();
    const auto& last = map.branches[static_cast<size_t>(omega[p - 1] - 1)];
    Rational lo = last.lo, hi = last.hi;
    for (size_t t = p - 1; t-- > 0;) {
        const auto& br = map.branches[static_cast<size_t>(omega[t] - 1)];
        // preimage of [lo, hi) under x -> lambda x + delta, intersected with
        // the branch domain
        Rational plo = (lo - br.delta) / map.lambda();
        Rational phi = (hi - br.delta) / map.lambda();
        lo = std::max(plo, br.lo);
        hi = std::min(phi, br.hi);
        if (!(lo < hi)) return std::nullopt;
    }
    return HalfOpenInterval{lo, hi};
}

struct CertifiedCycle {
    int period = 0;
    Itinerary omega;
    Rational point;  // the periodic point realizing omega, point = H/(1-lambda^p)
    Rational trap_lo, trap_hi;
    std::vector<Rational> orbit;  // point, f(point), ..., f^{p-1}(point)
    std::vector<long> wraps;
    Rational min_point;
};

inline bool is_primitive_word(const Itinerary& w) {
    const size_t p = w.size();
    for (size_t d = 1; d <= p / 2; ++d) {
        if (p % d != 0) continue;
        bool repeats = true;
        for (size_t i = d; i < p && repeats; ++i) repeats = w[i] == w[i - d];
        if (repeats) return false;
    }
    return true;
}

inline Rational pow_rational(const Rational& base, int e) {
    Rational acc = 1;
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

/// Attempts to certify a periodic orbit with itinerary word omega. Accepts
/// iff the word is primitive, its itinerary cell J is nonempty, the affine
/// fixed point x* = H_omega/(1 - lambda^p) lies in J (right endpoint
/// excluded), and f^p maps J into its closure. Acceptance makes x* a genuine
/// periodic point by right continuity.
inline std::optional<CertifiedCycle> certify_cycle(const PwMap<Rational>& map,
                                                   const Itinerary& omega) {
    if (omega.empty()) fail(errc::empty_itinerary, "cannot certify empty word");
    if (!is_primitive_word(omega)) return std::nullopt;

    const int p = static_cast<int>(omega.size());
    Rational h = offset_polynomial(map, omega);
    Rational lam_p = pow_rational(map.lambda(), p);
    Rational x_star = h / (1 - lam_p);

    auto cell = maximal_itinerary_interval(map, omega);
    if (!cell) return std::nullopt;
    if (!(x_star >= cell->lo && x_star < cell->hi)) return std::nullopt;
    // contraction certificate: g([u,v)) inside [u,v] for g = lambda^p x + H
    if (!(lam_p * cell->lo + h >= cell->lo && lam_p * cell->hi + h <= cell->hi))
        return std::nullopt;

    CertifiedCycle c;
    c.period = p;
    c.omega = omega;
    c.point = x_star;
    c.trap_lo = cell->lo;
    c.trap_hi = cell->hi;
    Rational cur = x_star;
    for (int t = 0; t < p; ++t) {
        int j = branch_index(map, cur);
        if (j != omega[static_cast<size_t>(t)]) return std::nullopt;  // defensive; unreachable
        const auto& br = map.branches[static_cast<size_t>(j - 1)];
        c.orbit.push_back(cur);
        c.wraps.push_back(br.wrap);
        cur = map.lambda() * cur + br.delta;
    }
    if (cur != x_star) fail(errc::branch_escapes_unit, "certified point failed exact re-iteration");
    c.min_point = *std::min_element(c.orbit.begin(), c.orbit.end());
    return c;
}

// ---------------------------------------------------------------------------
// Periodic-orbit search
// ---------------------------------------------------------------------------

namespace detail {

inline Itinerary primitive_root(const Itinerary& w) {
    const size_t p = w.size();
    for (size_t d = 1; d <= p; ++d) {
        if (p % d != 0) continue;
        bool repeats = true;
        for (size_t i = d; i < p && repeats; ++i) repeats = w[i] == w[i - d];
        if (repeats) return Itinerary(w.begin(), w.begin() + static_cast<long>(d));
    }
    return w;
}

inline Itinerary minimal_rotation(const Itinerary& w) {
    Itinerary best = w;
    Itinerary rot = w;
    for (size_t r = 1; r < w.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

inline bool tail_repeats(const Itinerary& itin, int period) {
    const long n = static_cast<long>(itin.size());
    if (n < 2L * period) return false;
    for (long i = 0; i < period; ++i)
        if (itin[static_cast<size_t>(n - 1 - i)] != itin[static_cast<size_t>(n - 1 - i - period)])
            return false;
    return true;
}

/// Float inner approximation of a trap [u, v): an enclosure inside these
/// bounds certainly lies in the trap.
struct TrapBounds {
    Float lo_in, hi_in;
};

inline TrapBounds trap_bounds(const Rational& u, const Rational& v) {
    TrapBounds tb;
    tb.lo_in = float_above(u);
    Float f = float_below(v);
    tb.hi_in = to_rational_exact(f) < v ? f : nudge_down(f);
    return tb;
}

inline bool enclosure_in_trap(const Float& lo, const Float& hi, const TrapBounds& tb) {
    return lo >= tb.lo_in && hi <= tb.hi_in;
}

inline constexpr long kScanStride = 64;

struct SeedOutcome {
    std::vector<CertifiedCycle> cycles;
    long steps = 0;
    long exact_steps = 0;
    int candidates = 0;
    bool unresolved = false;
};

/// Pass 1 for one seed: iterate, scan the itinerary tail for repeating
/// windows, certify fresh candidates exactly, stop once the enclosure enters
/// a trap certified by this seed.
inline SeedOutcome harvest_seed(const PwMap<Rational>& map, const Shadow& sh,
                                const Rational& seed, const Budget& budget) {
    SeedOutcome out;
    OrbitTracker<Rational> tracker(map, sh, seed);
    std::set<Itinerary> tried;
    std::vector<TrapBounds> traps;

    auto scan = [&]() {
        const Itinerary& itin = tracker.itinerary();
        for (int period = 1; period <= budget.p_max; ++period) {
            if (!tail_repeats(itin, period)) continue;
            Itinerary w(itin.end() - period, itin.end());
            Itinerary canon = minimal_rotation(primitive_root(w));
            if (!tried.insert(canon).second) continue;
            ++out.candidates;
            if (auto c = certify_cycle(map, canon)) {
                // keep the phase starting at the smallest orbit point
                auto at = std::min_element(c->orbit.begin(), c->orbit.end());
                auto shift = at - c->orbit.begin();
                Itinerary rotated = canon;
                std::rotate(rotated.begin(), rotated.begin() + shift, rotated.end());
                auto canonical = certify_cycle(map, rotated);
                const CertifiedCycle& keep = canonical ? *canonical : *c;
                traps.push_back(trap_bounds(keep.trap_lo, keep.trap_hi));
                out.cycles.push_back(keep);
            }
        }
    };

    for (long t = 0; t < budget.t_max; ++t) {
        bool settled = false;
        for (const auto& tb : traps)
            if (enclosure_in_trap(tracker.lo(), tracker.hi(), tb)) {
                settled = true;
                break;
            }
        if (settled) break;
        if (tracker.step() == TrackStatus::unresolved) {
            out.unresolved = true;
            break;
        }
        if (tracker.steps() % kScanStride == 0) scan();
    }
    if (!tracker.unresolved()) scan();
    out.steps = tracker.steps();
    out.exact_steps = tracker.exact_steps_used();
    return out;
}

}  // namespace detail

struct SearchDiagnostics {
    long steps = 0;
    long exact_steps = 0;
    int candidates = 0;
    int seeds = 0;
    int unresolved_seeds = 0;
};

/// Enumerates certified periodic orbits reachable from singular-point orbits
/// and from component midpoints of I \ S^(depth). The result is
/// deduplicated by orbit and ordered by smallest orbit point. The search is
/// complete for orbits shadowed by the seed set within budget; coverage
/// beyond that is reported, not claimed.
inline std::vector<CertifiedCycle> find_periodic_orbits(const PwMap<Rational>& map,
                                                        const Budget& budget = {},
                                                        SearchDiagnostics* diag = nullptr) {
    if (budget.t_max < 1 || budget.p_max < 1 || budget.depth < 1)
        fail(errc::bad_range, "budget fields must be >= 1");
    Shadow sh = make_shadow(map);

    std::vector<Rational> seeds = map.singular;
    for (auto& m : component_midpoints(map, budget.depth)) seeds.push_back(m);

    std::vector<detail::SeedOutcome> outcomes(seeds.size());
    parallel_for(seeds.size(), [&](size_t i) {
        outcomes[i] = detail::harvest_seed(map, sh, seeds[i], budget);
    });

    std::vector<CertifiedCycle> cycles;
    SearchDiagnostics d;
    d.seeds = static_cast<int>(seeds.size());
    for (auto& oc : outcomes) {
        d.steps += oc.steps;
        d.exact_steps += oc.exact_steps;
        d.candidates += oc.candidates;
        if (oc.unresolved) ++d.unresolved_seeds;
        for (auto& c : oc.cycles) cycles.push_back(std::move(c));
    }
    std::sort(cycles.begin(), cycles.end(), [](const CertifiedCycle& a, const CertifiedCycle& b) {
        return a.min_point != b.min_point ? a.min_point < b.min_point : a.period < b.period;
    });
    cycles.erase(std::unique(cycles.begin(), cycles.end(),
                             [](const CertifiedCycle& a, const CertifiedCycle& b) {
                                 return a.min_point == b.min_point && a.period == b.period;
                             }),
                 cycles.end());
    if (diag) *diag = d;
    return cycles;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class Verdict { asymptotically_periodic, singular_connection, undecided };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::asymptotically_periodic: return "ASYMPTOTICALLY_PERIODIC";
        case Verdict::singular_connection: return "SINGULAR_CONNECTION";
        case Verdict::undecided: return "UNDECIDED";
    }
    return "?";
}

struct BudgetUsed {
    long steps = 0;
    long exact_steps = 0;
    int candidates = 0;
    int seeds = 0;
    int unresolved_seeds = 0;
    int p_max = 0;
    int depth = 0;
};

struct Classification {
    Verdict verdict = Verdict::undecided;
    std::vector<CertifiedCycle> cycles;
    // singular point -> index into cycles, or nullopt when unresolved
    std::vector<std::pair<Rational, std::optional<int>>> assignment;
    BudgetUsed budget_used;
    std::optional<Connection> connection;  // witness when verdict is singular_connection
    bool precision_unresolved = false;     // some orbit stopped on an exactness limit
};

namespace detail {

/// Pass 2: certify convergence of one seed by trap entry. An enclosure that
/// lands inside a cycle's itinerary cell J certifies the omega-limit: f^p is
/// an affine contraction of J into itself.
inline std::pair<std::optional<int>, long> resolve_seed(const PwMap<Rational>& map,
                                                        const Shadow& sh, const Rational& seed,
                                                        const std::vector<TrapBounds>& traps,
                                                        long t_max) {
    OrbitTracker<Rational> tracker(map, sh, seed);
    for (long t = 0; t <= t_max; ++t) {
        for (size_t c = 0; c < traps.size(); ++c)
            if (enclosure_in_trap(tracker.lo(), tracker.hi(), traps[c]))
                return {static_cast<int>(c), tracker.steps()};
        if (t == t_max || tracker.step() == TrackStatus::unresolved) break;
    }
    return {std::nullopt, tracker.steps()};
}

}  // namespace detail

/// Classifies one map: certifies cycles, then certifies convergence of every
/// singular-point orbit and every component-midpoint orbit into some cycle's
/// trap. ASYMPTOTICALLY_PERIODIC requires all of them to resolve; otherwise
/// a detected singular connection names the obstruction, and UNDECIDED is
/// the budget-exhausted fallback.
inline Classification classify_map(const PwMap<Rational>& map, const Budget& budget = {}) {
    Classification cls;
    SearchDiagnostics diag;
    cls.cycles = find_periodic_orbits(map, budget, &diag);

    Shadow sh = make_shadow(map);
    std::vector<detail::TrapBounds> traps;
    traps.reserve(cls.cycles.size());
    for (const auto& c : cls.cycles) traps.push_back(detail::trap_bounds(c.trap_lo, c.trap_hi));

    std::vector<Rational> probes = map.singular;
    const size_t n_singular = probes.size();
    for (auto& m : component_midpoints(map, budget.depth)) probes.push_back(m);

    std::vector<std::pair<std::optional<int>, long>> resolved(probes.size());
    parallel_for(probes.size(), [&](size_t i) {
        resolved[i] = detail::resolve_seed(map, sh, probes[i], traps, budget.t_max);
    });

    bool all_resolved = true;
    for (size_t i = 0; i < probes.size(); ++i) {
        if (!resolved[i].first) all_resolved = false;
        diag.steps += resolved[i].second;
        if (i < n_singular) cls.assignment.emplace_back(probes[i], resolved[i].first);
    }

    cls.budget_used = BudgetUsed{diag.steps,     diag.exact_steps,      diag.candidates,
                                 diag.seeds,     diag.unresolved_seeds, budget.p_max,
                                 budget.depth};
    cls.precision_unresolved = diag.unresolved_seeds > 0;

    if (all_resolved) {
        cls.verdict = Verdict::asymptotically_periodic;
    } else if (auto conn = detect_connection(map, kDefaultConnectionDepth)) {
        cls.verdict = Verdict::singular_connection;
        cls.connection = conn;
    } else {
        cls.verdict = Verdict::undecided;
    }
    return cls;
}

// ---------------------------------------------------------------------------
// Orbit-count bounds
// ---------------------------------------------------------------------------

struct BoundReport {
    int k = 0;       // intercept count of the generating function
    int n_disc = 0;  // discontinuity points of the realized map
    int ell = 0;     // discontinuities mapping exactly to 0
    std::optional<int> n_classes;  // #A(f) when every singular orbit resolved
    int n_cycles = 0;

    int bound() const { return std::min(k, n_disc + 1 - ell); }
};

/// Checks the certified cycle count against the two orbit-count bounds
/// (n+1-ell over discontinuities, and k over intercepts). A violation is an
/// implementation bug, never new mathematics, hence the hard error.
inline BoundReport bound_report(const PwMap<Rational>& map, const Classification& cls) {
    BoundReport rep;
    rep.k = map.spec.k();
    rep.n_disc = map.branch_count() - 1;
    for (size_t j = 1; j < map.singular.size(); ++j)
        if (eval(map, map.singular[j]) == 0) ++rep.ell;
    rep.n_cycles = static_cast<int>(cls.cycles.size());
    if (rep.n_cycles > rep.n_disc + 1 - rep.ell || rep.n_cycles > rep.k)
        fail(errc::bound_violation, "certified cycles exceed the orbit-count bound");
    bool all = !cls.assignment.empty();
    std::set<int> classes;
    for (const auto& [point, id] : cls.assignment) {
        if (!id) {
            all = false;
            break;
        }
        classes.insert(*id);
    }
    if (all) rep.n_classes = static_cast<int>(classes.size());
    return rep;
}

}  // namespace pwc
