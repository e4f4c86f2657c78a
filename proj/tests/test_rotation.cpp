#include <catch2/catch.hpp>

#include "pwc/pwc.hpp"
#include "test_support.hpp"

using namespace pwc;

TEST_CASE("contracted_rotation builds the 2-branch wrap at c = (1-b)/lambda") {
    PwMap<Rational> map = contracted_rotation(Rational(1, 2), Rational(3, 4));
    REQUIRE(map.branch_count() == 2);
    CHECK(map.singular == std::vector<Rational>{Rational(0), Rational(1, 2)});
    CHECK(map.branches[0].delta == Rational(3, 4));
    CHECK(map.branches[1].delta == Rational(-1, 4));

    CHECK(contracted_rotation(Rational(1, 2), Rational(2, 3)).singular[1] == Rational(2, 3));

    CHECK_THROWS_MATCHES(contracted_rotation(Rational(1, 2), Rational(1, 4)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::parameter_outside_triangle;
                         }));
}

TEST_CASE("S_coefficient floor sums") {
    for (const Rational& lam : {Rational(1, 10), Rational(1, 2), Rational(9, 10)}) {
        CHECK(S_coefficient(lam, 1, 2) == 1);
        CHECK(S_coefficient(lam, 1, 3) == 1);
        CHECK(S_coefficient(lam, 2, 3) == 1 + lam);
    }
    CHECK_THROWS_MATCHES(S_coefficient(Rational(1, 2), 2, 4), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::not_coprime; }));
    CHECK_THROWS_MATCHES(S_coefficient(Rational(1, 2), 3, 2), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::bad_range; }));
    CHECK_THROWS_AS(S_coefficient(Rational(1, 2), 0, 5), Error);
}

TEST_CASE("S_coefficient degree bound and telescoped value at lambda = 1") {
    // sum of the floor differences telescopes to p - 1, so S(1, p/q) = p
    for (long q = 2; q <= 12; ++q)
        for (long p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            CHECK(S_coefficient(Rational(1), p, q) == p);
        }
}

TEST_CASE("tongue_interval pins the book values at lambda = 1/2") {
    Tongue half = tongue_interval(Rational(1, 2), 1, 2);
    CHECK(half.b_lo == Rational(2, 3));
    CHECK(half.b_hi == Rational(5, 6));

    Tongue third = tongue_interval(Rational(1, 2), 1, 3);
    CHECK(third.b_lo == Rational(4, 7));
    CHECK(third.b_hi == Rational(9, 14));
}

TEST_CASE("the q = 2 tongue width is lambda(1-lambda)/(1+lambda)") {
    for (int j = 1; j <= 9; ++j) {
        Rational lam(j, 10);
        Tongue t = tongue_interval(lam, 1, 2);
        CHECK(t.b_hi - t.b_lo == lam * (1 - lam) / (1 + lam));
        CHECK(t.b_hi > t.b_lo);
    }
}

TEST_CASE("rotation_number certifies rational values exactly") {
    RotationResult a = rotation_number(Rational(1, 2), Rational(3, 4));
    REQUIRE(a.kind == RotationKind::exact_rational);
    CHECK(a.p == 1);
    CHECK(a.q == 2);

    // 3/5 lies strictly inside the 1/3 tongue [4/7, 9/14]
    RotationResult b = rotation_number(Rational(1, 2), Rational(3, 5));
    REQUIRE(b.kind == RotationKind::exact_rational);
    CHECK(b.p == 1);
    CHECK(b.q == 3);
}

TEST_CASE("rotation_number falls back to the wrap-fraction estimate") {
    // with the period cap below the true period nothing can certify
    Budget tight;
    tight.t_max = 2000;
    tight.p_max = 3;
    RotationResult r = rotation_number(Rational(1, 2), Rational(51, 100), tight);
    REQUIRE(r.kind == RotationKind::estimate);
    CHECK(r.value > 0);
    CHECK(r.value < 1);
    CHECK(r.n_steps == 2000);
    REQUIRE(r.wrap_fraction_history.size() >= 2);
}

TEST_CASE("estimator tracks a certified rational to within 1/n") {
    Budget tight;
    tight.t_max = 1000;
    tight.p_max = 1;  // the 2-cycle cannot certify, forcing the estimator
    RotationResult r = rotation_number(Rational(1, 2), Rational(3, 4), tight);
    REQUIRE(r.kind == RotationKind::estimate);
    CHECK(std::abs(r.value - 0.5) <= 1.0 / static_cast<double>(r.n_steps));
}

TEST_CASE("certified wrap counts equal the rotation number") {
    for (auto [lam, b] : {std::pair{Rational(2, 5), Rational(7, 10)},
                          std::pair{Rational(1, 2), Rational(3, 4)},
                          std::pair{Rational(7, 10), Rational(2, 5)}}) {
        Classification cls = classify_map(contracted_rotation(lam, b));
        if (cls.cycles.empty()) continue;
        RotationResult r = rotation_number(lam, b);
        REQUIRE(r.kind == RotationKind::exact_rational);
        long wraps = 0;
        for (long w : cls.cycles[0].wraps) wraps += -w;
        CHECK(Rational(wraps, cls.cycles[0].period) == Rational(r.p, r.q));
    }
}

TEST_CASE("tongue_atlas rows are ordered and have disjoint interiors") {
    auto atlas = tongue_atlas(2, {Rational(1, 2)});
    REQUIRE(atlas.size() == 1);
    CHECK(atlas[0].b_lo == Rational(2, 3));
    CHECK(atlas[0].b_hi == Rational(5, 6));

    auto atlas3 = tongue_atlas(3, {Rational(1, 2)});
    REQUIRE(atlas3.size() == 3);
    CHECK(atlas3[0].p == 1);
    CHECK(atlas3[0].q == 3);
    CHECK(atlas3[1].p == 1);
    CHECK(atlas3[1].q == 2);
    CHECK(atlas3[2].p == 2);
    CHECK(atlas3[2].q == 3);
    for (size_t i = 0; i + 1 < atlas3.size(); ++i) CHECK(atlas3[i].b_hi <= atlas3[i + 1].b_lo);
}

TEST_CASE("tongues stay inside the parameter triangle") {
    std::vector<Rational> grid;
    for (int j = 1; j <= 9; ++j) grid.emplace_back(j, 10);
    for (const Tongue& t : tongue_atlas(5, grid)) {
        CHECK(t.b_lo > 1 - t.lambda);
        CHECK(t.b_hi < 1);
        CHECK(t.b_lo <= t.b_hi);
    }
}

TEST_CASE("interior tongue points yield the tongue's rotation number") {
    // a slice of the keystone consistency check; the acceptance suite runs
    // the full grid
    Rational lam(3, 10);
    for (long q = 2; q <= 4; ++q)
        for (long p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            Tongue t = tongue_interval(lam, p, q);
            for (int i = 1; i <= 2; ++i) {
                Rational b = t.b_lo + Rational(i, 3) * (t.b_hi - t.b_lo);
                if (!(b > 1 - lam && b < 1 && b > t.b_lo && b < t.b_hi)) continue;
                RotationResult r = rotation_number(lam, b);
                REQUIRE(r.kind == RotationKind::exact_rational);
                CHECK(r.p == p);
                CHECK(r.q == q);
            }
        }
}
