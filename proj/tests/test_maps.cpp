#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <vector>

#include "revgen/maps.hpp"

using namespace revgen;
using namespace revgen::maps;

namespace {

// Oracle: signed wide arithmetic with an explicit floor reduction.
std::uint64_t add_multiple_mod(std::uint64_t base, std::int64_t coeff,
                               std::uint64_t factor, unsigned frac_bits) {
    const __int128 m = static_cast<__int128>(1) << frac_bits;
    __int128 v = static_cast<__int128>(base) +
                 static_cast<__int128>(coeff) * static_cast<__int128>(factor);
    v %= m;
    if (v < 0) {
        v += m;
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<PhasePoint> random_points(std::mt19937_64& rng, unsigned frac_bits,
                                      std::size_t count) {
    std::vector<PhasePoint> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back({rng() & low_mask(frac_bits), rng() & low_mask(frac_bits)});
    }
    return pts;
}

} // namespace

TEST_CASE("shears move one coordinate by an exact grid multiple") {
    // Grid of 16: (q, p) = (4, 8) is (0.25, 0.5).
    const ReversibleMap shear_q{ShearQ{1}};
    CHECK(apply(shear_q, {4, 8}, 4) == PhasePoint{12, 8});

    const ReversibleMap shear_p{ShearP{1}};
    CHECK(apply(shear_p, {4, 8}, 4) == PhasePoint{4, 12});

    const ReversibleMap identity{ShearQ{0}};
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const PhasePoint pt{rng() & low_mask(32), rng() & low_mask(32)};
        CHECK(apply(identity, pt, 32) == pt);
    }
}

TEST_CASE("shears match wide-arithmetic reduction, including negative slopes") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 2000; ++trial) {
        const unsigned f = 1 + static_cast<unsigned>(rng() % 62);
        const std::int64_t c = static_cast<std::int64_t>(rng() % 4001) - 2000;
        const PhasePoint pt{rng() & low_mask(f), rng() & low_mask(f)};

        const PhasePoint got_q = apply(ReversibleMap{ShearQ{c}}, pt, f);
        CHECK(got_q.q == add_multiple_mod(pt.q, c, pt.p, f));
        CHECK(got_q.p == pt.p);

        const PhasePoint got_p = apply(ReversibleMap{ShearP{c}}, pt, f);
        CHECK(got_p.p == add_multiple_mod(pt.p, c, pt.q, f));
        CHECK(got_p.q == pt.q);
    }
}

TEST_CASE("time_reverse negates momentum on the grid") {
    CHECK(time_reverse({8, 4}, 4) == PhasePoint{8, 12}); // (0.5, 0.25) -> (0.5, 0.75)
    CHECK(time_reverse({8, 0}, 4) == PhasePoint{8, 0});  // zero momentum is fixed

    std::mt19937_64 rng(3);
    for (const PhasePoint& pt : random_points(rng, 32, 100000)) {
        REQUIRE(time_reverse(time_reverse(pt, 32), 32) == pt);
    }
}

TEST_CASE("single shears are reversible under momentum negation") {
    std::mt19937_64 rng(4);
    const auto pts = random_points(rng, 32, 10000);
    for (std::int64_t c : {-97, -1, 0, 1, 3, 1234}) {
        CHECK(check_reversibility(ReversibleMap{ShearQ{c}}, pts, 32).reversible);
        CHECK(check_reversibility(ReversibleMap{ShearP{c}}, pts, 32).reversible);
    }
}

TEST_CASE("coordinate exchange is an involution but fails reversibility") {
    const ReversibleMap ex{Exchange{}};
    std::mt19937_64 rng(5);
    const auto pts = random_points(rng, 16, 1000);
    for (const PhasePoint& pt : pts) {
        CHECK(apply(ex, apply(ex, pt, 16), 16) == pt);
    }

    // Negation composed with exchange is a quarter turn, not an involution.
    const ReversibilityResult res = check_reversibility(ex, pts, 16);
    CHECK_FALSE(res.reversible);
    REQUIRE(res.counterexample.has_value());
    const PhasePoint bad = *res.counterexample;
    CHECK(apply(ex, time_reverse(apply(ex, bad, 16), 16), 16) !=
          time_reverse(bad, 16));
}

TEST_CASE("palindromic composites of random shears are reversible") {
    std::mt19937_64 rng(6);
    const auto pts = random_points(rng, 16, 200);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t half_len = 1 + rng() % 6;
        std::vector<ReversibleMap> half;
        for (std::size_t i = 0; i < half_len; ++i) {
            const std::int64_t c = static_cast<std::int64_t>(rng() % 2001) - 1000;
            if (rng() & 1) {
                half.push_back(ReversibleMap{ShearQ{c}});
            } else {
                half.push_back(ReversibleMap{ShearP{c}});
            }
        }
        const ReversibleMap m = compose_palindrome(half);
        const ReversibilityResult res = check_reversibility(m, pts, 16);
        if (!res.reversible) {
            FAIL("palindromic composite failed at trial " << trial);
        }
    }
}

TEST_CASE("asymmetric shear pair fails, its palindrome passes (exhaustive)") {
    std::vector<PhasePoint> all;
    for (std::uint64_t q = 0; q < 256; ++q) {
        for (std::uint64_t p = 0; p < 256; ++p) {
            all.push_back({q, p});
        }
    }

    const ReversibleMap qp{Composite{
        {ReversibleMap{ShearQ{1}}, ReversibleMap{ShearP{1}}}}};
    CHECK_FALSE(check_reversibility(qp, all, 8).reversible);

    const ReversibleMap qpq{Composite{{ReversibleMap{ShearQ{1}},
                                       ReversibleMap{ShearP{1}},
                                       ReversibleMap{ShearQ{1}}}}};
    CHECK(check_reversibility(qpq, all, 8).reversible);
}

TEST_CASE("maps permute the full grid (exhaustive, 8 fractional bits)") {
    std::vector<ReversibleMap> maps{
        ReversibleMap{ShearQ{3}},
        ReversibleMap{ShearP{-5}},
        ReversibleMap{Exchange{}},
        compose_palindrome({ReversibleMap{ShearP{7}}, ReversibleMap{ShearQ{-2}},
                            ReversibleMap{Exchange{}}}),
    };
    for (const ReversibleMap& m : maps) {
        std::vector<bool> seen(65536, false);
        for (std::uint64_t q = 0; q < 256; ++q) {
            for (std::uint64_t p = 0; p < 256; ++p) {
                const PhasePoint out = apply(m, {q, p}, 8);
                const std::size_t code =
                    static_cast<std::size_t>((out.q << 8) | out.p);
                REQUIRE_FALSE(seen[code]);
                seen[code] = true;
            }
        }
    }
}

TEST_CASE("compose_palindrome mirrors the half sequence around its pivot") {
    const ReversibleMap a{ShearQ{2}};
    const ReversibleMap b{ShearP{5}};
    const ReversibleMap c{ShearQ{-3}};

    std::mt19937_64 rng(7);
    const auto pts = random_points(rng, 20, 500);

    // Single map: unchanged.
    const ReversibleMap solo = compose_palindrome({a});
    for (const PhasePoint& pt : pts) {
        CHECK(apply(solo, pt, 20) == apply(a, pt, 20));
    }

    // Two maps: a then b then a again.
    const ReversibleMap aba = compose_palindrome({a, b});
    for (const PhasePoint& pt : pts) {
        const PhasePoint manual =
            apply(a, apply(b, apply(a, pt, 20), 20), 20);
        CHECK(apply(aba, pt, 20) == manual);
    }

    // Three maps: a b c b a.
    const ReversibleMap abcba = compose_palindrome({a, b, c});
    for (const PhasePoint& pt : pts) {
        const PhasePoint manual = apply(
            a, apply(b, apply(c, apply(b, apply(a, pt, 20), 20), 20), 20), 20);
        CHECK(apply(abcba, pt, 20) == manual);
    }

    CHECK_THROWS_AS(compose_palindrome({}), std::invalid_argument);
}

TEST_CASE("nested composites apply in sequence") {
    const ReversibleMap inner{Composite{
        {ReversibleMap{ShearP{1}}, ReversibleMap{ShearQ{1}}}}};
    const ReversibleMap outer{Composite{{ReversibleMap{ShearQ{1}}, inner}}};
    // (q, p) -> q += p; then p += q; then q += p.
    PhasePoint pt{3, 5};
    pt = apply(outer, pt, 8);
    CHECK(pt == PhasePoint{21, 13});
}

TEST_CASE("fractional bit width is validated") {
    CHECK_THROWS_AS(validate_frac_bits(0), RangeError);
    CHECK_THROWS_AS(validate_frac_bits(63), RangeError);
    CHECK_NOTHROW(validate_frac_bits(1));
    CHECK_NOTHROW(validate_frac_bits(62));
    CHECK_THROWS_AS(apply(ReversibleMap{ShearQ{1}}, {0, 0}, 0), RangeError);
}
