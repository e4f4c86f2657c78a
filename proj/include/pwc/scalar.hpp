#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "pwc/errors.hpp"

namespace pwc {

/// Exact arithmetic: arbitrary-precision rationals, canonical reduced form.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Float arithmetic: IEEE binary128 emulation (113-bit significand).
using Float = boost::multiprecision::cpp_bin_float_quad;

/// The two arithmetic modes are distinct C++ types, so mixed-mode
/// expressions are rejected at compile time rather than tagged at runtime.
template <class S>
concept ScalarType = std::same_as<S, Rational> || std::same_as<S, Float>;

template <class S>
inline constexpr bool is_exact_v = std::same_as<S, Rational>;

enum class ArithmeticMode { exact, floating };

/// Comparison guard band for float-mode branch assignment.
inline const Float kEpsCmp = boost::multiprecision::ldexp(Float(1), -40);

// ---------------------------------------------------------------------------
// Parsing and rendering
// ---------------------------------------------------------------------------

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace detail

/// Parses "p/q", an integer, or a plain decimal literal ("0.375", "-1.5").
/// Decimals are read exactly as decimal fractions, never through binary
/// floating point.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) fail(errc::invalid_argument, "empty scalar literal");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) fail(errc::invalid_argument, "sign without digits in '" + std::string(text) + "'");

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den))
            fail(errc::invalid_argument, "malformed fraction '" + std::string(text) + "'");
        BigInt n{std::string(num)};
        BigInt d{std::string(den)};
        if (d == 0) fail(errc::invalid_argument, "zero denominator in '" + std::string(text) + "'");
        value = Rational(n, d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty())
            fail(errc::invalid_argument, "malformed decimal '" + std::string(text) + "'");
        if (!ip.empty() && !detail::all_digits(ip))
            fail(errc::invalid_argument, "malformed decimal '" + std::string(text) + "'");
        if (!fp.empty() && !detail::all_digits(fp))
            fail(errc::invalid_argument, "malformed decimal '" + std::string(text) + "'");
        BigInt intpart = ip.empty() ? BigInt(0) : BigInt(std::string(ip));
        BigInt scale = 1;
        BigInt frac = 0;
        if (!fp.empty()) {
            frac = BigInt(std::string(fp));
            for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        }
        value = Rational(intpart * scale + frac, scale);
    } else {
        if (!detail::all_digits(s))
            fail(errc::invalid_argument, "malformed number '" + std::string(text) + "'");
        value = Rational(BigInt(std::string(s)));
    }
    return negative ? Rational(-value) : value;
}

/// Canonical exact rendering, always "num/den".
inline std::string to_fraction_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r) << '/' << denominator(r);
    return os.str();
}

/// Decimal rendering at a fixed number of significant digits.
inline std::string to_decimal_string(const Rational& r, int digits = 15) {
    std::ostringstream os;
    os << std::setprecision(digits) << r.convert_to<Float>();
    return os.str();
}

inline std::string to_decimal_string(const Float& f, int digits = 30) {
    std::ostringstream os;
    os << std::setprecision(digits) << f;
    return os.str();
}

/// Rendering dispatcher used by the artifact writers: exact scalars print as
/// fractions unless the caller asked for decimals, floats always as decimals.
template <ScalarType S>
inline std::string render_scalar(const S& v, bool decimal) {
    if constexpr (is_exact_v<S>) {
        return decimal ? to_decimal_string(v) : to_fraction_string(v);
    } else {
        (void)decimal;
        return to_decimal_string(v);
    }
}

// ---------------------------------------------------------------------------
// Integer parts
// ---------------------------------------------------------------------------

/// floor(r) as a big integer (cpp_rational division truncates toward zero).
inline BigInt floor_int(const Rational& r) {
    BigInt q = numerator(r) / denominator(r);
    if (r < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

inline BigInt ceil_int(const Rational& r) { return -floor_int(Rational(-r)); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

// ---------------------------------------------------------------------------
// Exact <-> float bridges
// ---------------------------------------------------------------------------

inline Float to_float(const Rational& r) { return r.convert_to<Float>(); }

/// Every finite binary float is a dyadic rational; this conversion is exact.
inline Rational to_rational_exact(const Float& f) { return static_cast<Rational>(f); }

/// One-step outward nudge. The bound is a few ulps wide, which keeps
/// enclosures provably conservative without directed-rounding support.
inline Float nudge_up(const Float& x) {
    static const Float rel = boost::multiprecision::ldexp(Float(1), -108);
    static const Float abs = boost::multiprecision::ldexp(Float(1), -140);
    return x + (boost::multiprecision::fabs(x) * rel + abs);
}

inline Float nudge_down(const Float& x) {
    static const Float rel = boost::multiprecision::ldexp(Float(1), -108);
    static const Float abs = boost::multiprecision::ldexp(Float(1), -140);
    return x - (boost::multiprecision::fabs(x) * rel + abs);
}

/// Largest float known (by exact comparison) to be <= r.
inline Float float_below(const Rational& r) {
    Float f = to_float(r);
    return to_rational_exact(f) <= r ? f : nudge_down(f);
}

/// Smallest float known (by exact comparison) to be >= r.
inline Float float_above(const Rational& r) {
    Float f = to_float(r);
    return to_rational_exact(f) >= r ? f : nudge_up(f);
}

template <ScalarType S>
inline S scalar_from_rational(const Rational& r) {
    if constexpr (is_exact_v<S>) return r;
    else return to_float(r);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const Float& f) { return f.convert_to<double>(); }

}  // namespace pwc
