#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pwc/errors.hpp"
#include "pwc/map.hpp"
#include "pwc/scalar.hpp"

namespace pwc {

inline constexpr int kDefaultConnectionDepth = 64;

/// A witnessed singular connection: the branch word omega carries the
/// partition point x onto the partition point y, y = lambda^n x + H_omega.
struct Connection {
    Itinerary omega;
    Rational x;
    Rational y;
    int order = 0;
    bool from_left_limit = false;  // witness orbit started as x^- rather than x
};

/// Q(lambda) = y - (lambda^n x + sum lambda^j delta_{i_{n-1-j}}), stored as
/// ascending coefficients of length n+1.
struct ConnectionPolynomial {
    std::vector<Rational> coeffs;
    Itinerary omega;
    Rational x;
    Rational y;

    int degree() const {
        for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d)
            if (coeffs[static_cast<size_t>(d)] != 0) return d;
        return -1;  // identically zero
    }

    Rational eval(const Rational& lambda) const {
        Rational acc = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * lambda + *it;
        return acc;
    }

    ConnectionPolynomial derivative() const {
        ConnectionPolynomial d;
        d.omega = omega;
        d.x = x;
        d.y = y;
        for (size_t j = 1; j < coeffs.size(); ++j)
            d.coeffs.push_back(coeffs[j] * Rational(static_cast<long>(j)));
        if (d.coeffs.empty()) d.coeffs.push_back(Rational(0));
        return d;
    }
};

struct RootBracket {
    Rational lo, hi;                // sign change across [lo, hi], or lo == hi
    std::optional<Rational> exact;  // set when the root itself is rational
};

// ---------------------------------------------------------------------------
// detect_connection
// ---------------------------------------------------------------------------

namespace detail {

/// Branch containing points immediately to the left of x (x in (0,1]).
template <ScalarType S>
int left_branch_index(const PwMap<S>& map, const S& x) {
    auto it = std::lower_bound(map.singular.begin(), map.singular.end(), x);
    int idx = static_cast<int>(it - map.singular.begin());
    return idx < 1 ? 1 : idx;  // branch with lo < x <= hi
}

}  // namespace detail

/// Forward search for a singular connection: iterates every partition point
/// a_j (right-continuous orbit) and every left limit a_j^- up to depth steps,
/// returning the first exact hit of {a_0, ..., a_k}. Seeds advance in
/// lockstep so the lowest-order witness wins; ties break by seed order
/// (a_0, a_1^-, a_1, ..., a_k^-).
inline std::optional<Connection> detect_connection(const PwMap<Rational>& map,
                                                   int depth = kDefaultConnectionDepth) {
    if (depth < 1) fail(errc::bad_range, "connection depth must be >= 1");
    const auto& targets = map.spec.a;

    struct Seed {
        Rational origin;   // the partition point the orbit started from
        Rational current;  // current orbit value
        Itinerary word;    // branch indices applied so far
        bool left;         // first step used the left-limit branch
        bool first_step = true;
    };
    std::vector<Seed> seeds;
    for (size_t j = 0; j < targets.size(); ++j) {
        if (targets[j] > 0) seeds.push_back(Seed{targets[j], targets[j], {}, true});
        if (targets[j] < 1) seeds.push_back(Seed{targets[j], targets[j], {}, false});
    }

    for (int n = 1; n <= depth; ++n) {
        for (auto& seed : seeds) {
            int j;
            if (seed.first_step && seed.left)
                j = detail::left_branch_index(map, seed.current);
            else
                j = branch_index(map, seed.current);
            seed.first_step = false;
            const auto& br = map.branches[static_cast<size_t>(j - 1)];
            seed.current = map.lambda() * seed.current + br.delta;
            seed.word.push_back(j);
            if (std::binary_search(targets.begin(), targets.end(), seed.current))
                return Connection{seed.word, seed.origin, seed.current, n, seed.left};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Connection polynomials over lambda
// ---------------------------------------------------------------------------

/// Builds Q_{x,y,omega}(lambda) from the per-branch offsets (1-based, constant
/// over the lambda-component the caller works in). Coefficients ascending:
/// [y - delta_{i_{n-1}}, -delta_{i_{n-2}}, ..., -delta_{i_0}, -x].
inline ConnectionPolynomial connection_polynomial(const Itinerary& omega, const Rational& x,
                                                  const Rational& y,
                                                  const std::vector<Rational>& deltas) {
    if (omega.empty()) fail(errc::empty_itinerary, "connection polynomial of empty word");
    const size_t n = omega.size();
    ConnectionPolynomial poly;
    poly.omega = omega;
    poly.x = x;
    poly.y = y;
    poly.coeffs.resize(n + 1);
    auto delta_of = [&](int entry) -> const Rational& {
        if (entry < 1 || entry > static_cast<int>(deltas.size()))
            fail(errc::bad_range, "word entry outside delta table");
        return deltas[static_cast<size_t>(entry - 1)];
    };
    poly.coeffs[0] = y - delta_of(omega[n - 1]);
    for (size_t j = 1; j < n; ++j) poly.coeffs[j] = -delta_of(omega[n - 1 - j]);
    poly.coeffs[n] = -x;
    if (poly.degree() < 0)
        fail(errc::identically_zero, "connection polynomial vanishes identically");
    return poly;
}

// ---------------------------------------------------------------------------
// Root isolation
// ---------------------------------------------------------------------------

namespace detail {

inline void isolate_recurse(const ConnectionPolynomial& poly, const Rational& lo,
                            const Rational& rational_lo_val, const Rational& hi,
                            const Rational& rational_hi_val, const Rational& width,
                            std::vector<RootBracket>& out) {
    if (hi - lo <= width) {
        bool lo_zero = rational_lo_val == 0;
        bool hi_zero = rational_hi_val == 0;
        if (lo_zero) out.push_back(RootBracket{lo, lo, lo});
        if (!lo_zero && !hi_zero && ((rational_lo_val < 0) != (rational_hi_val < 0)))
            out.push_back(RootBracket{lo, hi, std::nullopt});
        // a zero right endpoint is reported by the neighbouring cell's lo
        return;
    }
    Rational mid = (lo + hi) / 2;
    Rational mid_val = poly.eval(mid);
    isolate_recurse(poly, lo, rational_lo_val, mid, mid_val, width, out);
    isolate_recurse(poly, mid, mid_val, hi, rational_hi_val, width, out);
}

}  // namespace detail

/// Sign-change bisection with exact evaluation down to cells of size <=
/// width, over the open interval (lo, hi). Exact roots hit by the
/// subdivision grid are reported as point brackets; roots at lo or hi are
/// excluded. A single derivative pass recovers rational double roots;
/// even-multiplicity irrational roots may be missed.
inline std::vector<RootBracket> isolate_roots(const ConnectionPolynomial& poly,
                                              const Rational& lo, const Rational& hi,
                                              const Rational& width) {
    if (poly.degree() < 0) fail(errc::identically_zero, "cannot isolate roots of zero polynomial");
    if (!(lo < hi) || !(width > 0)) fail(errc::bad_range, "bad isolation interval or width");

    std::vector<RootBracket> out;
    detail::isolate_recurse(poly, lo, poly.eval(lo), hi, poly.eval(hi), width, out);

    if (poly.degree() >= 2) {
        ConnectionPolynomial deriv = poly.derivative();
        if (deriv.degree() >= 0) {
            std::vector<RootBracket> crit;
            detail::isolate_recurse(deriv, lo, deriv.eval(lo), hi, deriv.eval(hi), width, crit);
            for (const auto& c : crit)
                if (c.exact && poly.eval(*c.exact) == 0)
                    out.push_back(RootBracket{*c.exact, *c.exact, *c.exact});
        }
    }

    std::erase_if(out, [&](const RootBracket& r) {
        return r.exact && (*r.exact == lo || *r.exact == hi);
    });
    std::sort(out.begin(), out.end(),
              [](const RootBracket& p, const RootBracket& q) { return p.lo < q.lo; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const RootBracket& p, const RootBracket& q) {
                              return p.lo == q.lo && p.hi == q.hi;
                          }),
              out.end());
    return out;
}

// ---------------------------------------------------------------------------
// The bifurcation set V
// ---------------------------------------------------------------------------

/// All lambda in (0,1) where a one-sided branch value at a partition point
/// a_j (j >= 1) hits an integer: lambda = (m - b)/a_j over feasible m. These
/// are the slopes where the branch structure of the family can change.
inline std::vector<Rational> v_set(const MapSpec<Rational>& spec) {
    detail::validate_spec(spec);
    std::vector<Rational> out;
    auto push_solutions = [&](const Rational& aj, const Rational& b) {
        if (aj == 0) return;  // no lambda dependence
        BigInt m_lo = floor_int(b);
        BigInt m_hi = ceil_int(Rational(aj + b));
        for (BigInt m = m_lo; m <= m_hi; ++m) {
            Rational lambda = (Rational(m) - b) / aj;
            if (lambda > 0 && lambda < 1) out.push_back(lambda);
        }
    };
    const int k = spec.k();
    for (int j = 1; j <= k; ++j) {
        const Rational& aj = spec.a[static_cast<size_t>(j)];
        push_solutions(aj, spec.b[static_cast<size_t>(j - 1)]);  // left limit uses b_j
        if (j < k) push_solutions(aj, spec.b[static_cast<size_t>(j)]);  // right uses b_{j+1}
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace pwc
