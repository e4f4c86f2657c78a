#include <catch2/catch.hpp>

#include "pwc/pwc.hpp"
#include "test_support.hpp"

using namespace pwc;
using testsup::remark_map;
using testsup::rotation_map;
using testsup::single_branch_map;

TEST_CASE("build_map splits the remark map into its two pieces") {
    PwMap<Rational> map = remark_map();
    REQUIRE(map.branch_count() == 2);
    CHECK(map.branches[0].lo == 0);
    CHECK(map.branches[0].hi == Rational(1, 2));
    CHECK(map.branches[0].delta == Rational(1, 4));
    CHECK(map.branches[0].wrap == 0);
    CHECK(map.branches[1].lo == Rational(1, 2));
    CHECK(map.branches[1].hi == 1);
    CHECK(map.branches[1].delta == Rational(-1, 4));
    CHECK(map.branches[1].wrap == 0);
    CHECK(map.singular == std::vector<Rational>{Rational(0), Rational(1, 2)});
}

TEST_CASE("build_map keeps a single branch when the lift stays inside (0,1)") {
    PwMap<Rational> map = single_branch_map();
    REQUIRE(map.branch_count() == 1);
    CHECK(map.branches[0].lo == 0);
    CHECK(map.branches[0].hi == 1);
    CHECK(map.branches[0].delta == Rational(1, 4));
    CHECK(map.singular == std::vector<Rational>{Rational(0)});
}

TEST_CASE("build_map splits at the integer crossing of a wrapping branch") {
    MapSpec<Rational> spec;
    spec.a = {Rational(0), Rational(1)};
    spec.b = {Rational(3, 4)};
    spec.lambda = Rational(1, 2);
    PwMap<Rational> map = build_map(spec);
    REQUIRE(map.branch_count() == 2);
    // crossing solves lambda x + b = 1, so c = (1 - b)/lambda = 1/2
    CHECK(map.branches[0].hi == Rational(1, 2));
    CHECK(map.branches[0].delta == Rational(3, 4));
    CHECK(map.branches[0].wrap == 0);
    CHECK(map.branches[1].delta == Rational(-1, 4));
    CHECK(map.branches[1].wrap == -1);
}

TEST_CASE("build_map drops a crossing that lands exactly on a partition point") {
    MapSpec<Rational> spec;
    spec.a = {Rational(0), Rational(1, 2), Rational(1)};
    spec.b = {Rational(1, 4), Rational(3, 4)};
    spec.lambda = Rational(1, 2);
    PwMap<Rational> map = build_map(spec);
    // F(1/2^+) = 1 exactly: the second interval starts already wrapped
    REQUIRE(map.branch_count() == 2);
    CHECK(map.branches[1].lo == Rational(1, 2));
    CHECK(map.branches[1].delta == Rational(-1, 4));
    CHECK(map.branches[1].wrap == -1);
    for (const auto& br : map.branches) CHECK(br.lo < br.hi);
}

TEST_CASE("build_map merges continuation pieces so singular points are jumps") {
    MapSpec<Rational> spec;
    spec.a = {Rational(0), Rational(1, 2), Rational(1)};
    spec.b = {Rational(1, 4), Rational(5, 4)};  // differ by an integer
    spec.lambda = Rational(1, 2);
    PwMap<Rational> map = build_map(spec);
    REQUIRE(map.branch_count() == 1);
    CHECK(map.branches[0].delta == Rational(1, 4));
}

TEST_CASE("build_map validation errors") {
    MapSpec<Rational> bad;
    bad.a = {Rational(0), Rational(1, 2), Rational(1, 3), Rational(1)};
    bad.b = {Rational(1, 4), Rational(1, 5), Rational(1, 6)};
    bad.lambda = Rational(1, 2);
    CHECK_THROWS_MATCHES(build_map(bad), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::non_monotone_partition;
                         }));
    MapSpec<Rational> lam;
    lam.a = {Rational(0), Rational(1)};
    lam.b = {Rational(1, 4)};
    lam.lambda = Rational(3, 2);
    CHECK_THROWS_MATCHES(build_map(lam), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::lambda_out_of_range;
                         }));
    lam.lambda = Rational(0);
    CHECK_THROWS_AS(build_map(lam), Error);
}

TEST_CASE("eval applies the branch containing x") {
    CHECK(eval(remark_map(), Rational(1, 2)) == 0);
    CHECK(eval(remark_map(), Rational(0)) == Rational(1, 4));
    CHECK(eval(rotation_map(), Rational(0)) == Rational(3, 4));
    CHECK(eval(rotation_map(), Rational(3, 4)) == Rational(1, 8));
    CHECK_THROWS_MATCHES(eval(remark_map(), Rational(1)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::point_out_of_domain;
                         }));
    CHECK_THROWS_AS(eval(remark_map(), Rational(-1, 10)), Error);
}

TEST_CASE("branch_index uses the half-open convention") {
    CHECK(branch_index(remark_map(), Rational(1, 2)) == 2);
    CHECK(branch_index(remark_map(), Rational(49, 100)) == 1);
    CHECK(branch_index(rotation_map(), Rational(1, 6)) == 1);
}

TEST_CASE("singular_points accumulates exact preimages") {
    auto s1 = singular_points(remark_map(), 1);
    CHECK(s1.points == std::vector<Rational>{Rational(0), Rational(1, 2)});
    // f^-1(0) = {1/2}, f^-1(1/2) is empty: already closed at depth 2
    auto s2 = singular_points(remark_map(), 2);
    CHECK(s2.points == s1.points);
    for (int n : {1, 5, 40})
        CHECK(singular_points(single_branch_map(), n).points == std::vector<Rational>{Rational(0)});
}

TEST_CASE("itinerary_of walks the branch indices of the orbit") {
    CHECK(itinerary_of(rotation_map(), Rational(1, 6), 4) == Itinerary{1, 2, 1, 2});
    CHECK(itinerary_of(remark_map(), Rational(0), 3) == Itinerary{1, 1, 1});
    CHECK(itinerary_of(single_branch_map(), Rational(9, 10), 5) == Itinerary{1, 1, 1, 1, 1});
}

TEST_CASE("offset_polynomial composes branch offsets along a word") {
    CHECK(offset_polynomial(remark_map(), Itinerary{1, 2}) == Rational(-1, 8));
    CHECK(offset_polynomial(rotation_map(), Itinerary{1, 2}) == Rational(1, 8));
    CHECK(offset_polynomial(remark_map(), Itinerary{2}) == Rational(-1, 4));
    CHECK_THROWS_MATCHES(offset_polynomial(remark_map(), Itinerary{}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::empty_itinerary;
                         }));
}

TEST_CASE("count_itineraries equals the component count of the singular set") {
    CHECK(count_itineraries(remark_map(), 1) == 2);
    CHECK(count_itineraries(remark_map(), 2) == 2);
    CHECK(count_itineraries(single_branch_map(), 7) == 1);
}

TEST_CASE("Z-independence over the k x k difference grid") {
    CHECK(is_Z_independent({Rational(1, 2), Rational(1)}, {Rational(1, 4), Rational(-1, 4)}));
    CHECK_FALSE(is_Z_independent({Rational(1, 2), Rational(1)}, {Rational(1, 2), Rational(1, 3)}));
    CHECK(is_Z_independent({Rational(1)}, {Rational(3, 4)}));
}

TEST_CASE("exact composition identity f^n(x) = lambda^n x + H_omega") {
    testsup::Rng rng(871);
    for (int trial = 0; trial < 60; ++trial) {
        PwMap<Rational> map = build_map(testsup::random_spec(rng));
        Rational x = rng.unit_rational(50);
        int n = 1 + static_cast<int>(rng.below(20));
        Rational iterated = x;
        for (int t = 0; t < n; ++t) iterated = eval(map, iterated);
        Itinerary omega = itinerary_of(map, x, n);
        CHECK(iterated == pow_rational(map.lambda(), n) * x + offset_polynomial(map, omega));
    }
}

TEST_CASE("branch domains partition [0,1) and slopes are exactly lambda") {
    testsup::Rng rng(1213);
    for (int trial = 0; trial < 40; ++trial) {
        PwMap<Rational> map = build_map(testsup::random_spec(rng));
        CHECK(map.branches.front().lo == 0);
        CHECK(map.branches.back().hi == 1);
        for (size_t i = 0; i + 1 < map.branches.size(); ++i)
            CHECK(map.branches[i].hi == map.branches[i + 1].lo);
        for (const auto& br : map.branches) {
            Rational mid = (br.lo + br.hi) / 2;
            CHECK(eval(map, mid) - eval(map, br.lo) == map.lambda() * (mid - br.lo));
            CHECK(eval(map, br.lo) >= 0);
            CHECK(eval(map, mid) < 1);
        }
    }
}

TEST_CASE("singular sets are monotone and stabilize once closed") {
    testsup::Rng rng(3331);
    for (int trial = 0; trial < 25; ++trial) {
        PwMap<Rational> map = build_map(testsup::random_spec(rng));
        std::vector<Rational> prev = singular_points(map, 1).points;
        bool stabilized = false;
        for (int n = 2; n <= 7; ++n) {
            std::vector<Rational> cur = singular_points(map, n).points;
            CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            if (stabilized) CHECK(cur == prev);
            if (cur == prev) stabilized = true;
            prev = std::move(cur);
        }
    }
}

TEST_CASE("itinerary counts grow monotonically and at most N-fold") {
    testsup::Rng rng(474);
    for (int trial = 0; trial < 20; ++trial) {
        PwMap<Rational> map = build_map(testsup::random_spec(rng));
        long prev = count_itineraries(map, 1);
        CHECK(prev == map.branch_count());
        for (int n = 2; n <= 6; ++n) {
            long cur = count_itineraries(map, n);
            CHECK(prev <= cur);
            CHECK(cur <= map.branch_count() * prev);
            prev = cur;
        }
    }
}

TEST_CASE("a singular point shares the itinerary of its right neighbourhood") {
    testsup::Rng rng(6211);
    for (int trial = 0; trial < 15; ++trial) {
        PwMap<Rational> map = build_map(testsup::random_spec(rng));
        const int n = 5;
        auto deep = singular_points(map, n).points;
        for (const Rational& s : map.singular) {
            auto it = std::upper_bound(deep.begin(), deep.end(), s);
            Rational next = it != deep.end() ? *it : Rational(1);
            Rational probe = (s + next) / 2;
            CHECK(itinerary_of(map, s, n) == itinerary_of(map, probe, n));
        }
    }
}

TEST_CASE("float construction agrees with the converted exact map") {
    MapSpec<Float> spec;
    spec.a = {Float(0), Float(1)};
    spec.b = {Float(3) / 4};
    spec.lambda = Float(1) / 2;
    PwMap<Float> direct = build_map(spec);
    PwMap<Float> converted = to_float_map(contracted_rotation(Rational(1, 2), Rational(3, 4)));
    REQUIRE(direct.branch_count() == converted.branch_count());
    for (int j = 0; j < direct.branch_count(); ++j) {
        CHECK(direct.branches[j].lo == converted.branches[j].lo);
        CHECK(direct.branches[j].delta == converted.branches[j].delta);
        CHECK(direct.branches[j].wrap == converted.branches[j].wrap);
    }
}

TEST_CASE("float-mode preimage accumulation flags endpoint-grazing solutions") {
    // f^-1(0) of the remark map is exactly the branch endpoint 1/2; the
    // float route refuses to decide membership that close to the boundary
    PwMap<Float> fmap = to_float_map(remark_map());
    CHECK_THROWS_MATCHES(singular_points(fmap, 2), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::precision_loss;
                         }));
    // depth 1 never solves preimages, so it stays safe in float mode
    CHECK(singular_points(fmap, 1).points.size() == 2);
}

TEST_CASE("float mode flags branch assignments within the guard band") {
    PwMap<Float> fmap = to_float_map(remark_map());
    CHECK(branch_index(fmap, Float(1) / 2) == 2);
    Float near = Float(1) / 2 - boost::multiprecision::ldexp(Float(1), -60);
    CHECK_THROWS_MATCHES(branch_index(fmap, near), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::precision_loss;
                         }));
    // far from any boundary the assignment is unambiguous
    CHECK(branch_index(fmap, Float(1) / 4) == 1);
}
