#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lpplab/passage.hpp"
#include "lpplab/selfcheck.hpp"

using namespace lpplab;

namespace {
const Point o{0, 0};

double path_sum(const WeightField& f, const GeodesicPath& p) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) s += f.weight_at(p.vertices[i]);
    return s;
}
}  // namespace

TEST_CASE("endpoint convention") {
    const WeightField f = derive_trial_field(3, 0);
    CHECK(last_passage_time(f, Point{4, 9}, Point{4, 9}) == 0.0);
    CHECK(last_passage_time(f, o, Point{1, 0}) == f.weight_at(o));
    CHECK(last_passage_time(f, o, Point{0, 1}) == f.weight_at(o));
    CHECK_THROWS_AS(last_passage_time(f, Point{1, 0}, o), DomainError);
}

TEST_CASE("two-path box matches the explicit maximum") {
    const WeightField f = derive_trial_field(3, 1);
    const double via_right = f.weight_at(o) + f.weight_at(Point{1, 0});
    const double via_up = f.weight_at(o) + f.weight_at(Point{0, 1});
    CHECK(last_passage_time(f, o, Point{1, 1}) == std::max(via_right, via_up));
    const auto bf = brute_force_passage(f, o, Point{1, 1});
    CHECK(bf->first == std::max(via_right, via_up));
}

TEST_CASE("geodesic on trivial shapes") {
    const WeightField f = derive_trial_field(3, 2);
    const GeodesicPath single = geodesic(f, Point{2, 2}, Point{2, 2});
    CHECK(single.vertices.size() == 1);
    CHECK(single.passage_time == 0.0);

    const GeodesicPath vertical = geodesic(f, o, Point{0, 5});
    REQUIRE(vertical.vertices.size() == 6);
    for (std::int64_t j = 0; j <= 5; ++j) {
        CHECK(vertical.vertices[static_cast<std::size_t>(j)] == Point{0, j});
    }
}

TEST_CASE("6x6 instance agrees with enumeration, including the argmax path") {
    const WeightField f = derive_trial_field(3, 3);
    const Point v{6, 6};
    const double t = last_passage_time(f, o, v);
    const GeodesicPath g = geodesic(f, o, v);
    const auto bf = brute_force_passage(f, o, v);
    CHECK(t == bf->first);
    CHECK(g.vertices == bf->second.vertices);
    CHECK(g.passage_time == t);
}

TEST_CASE("constrained passage") {
    const WeightField f = derive_trial_field(3, 4);
    const Point v{6, 6};

    SUBCASE("whole plane equals unconstrained") {
        const auto res = constrained_passage(f, o, v, Region::whole_plane());
        CHECK(res->first == last_passage_time(f, o, v));
    }
    SUBCASE("region excluding the start is absent") {
        const Region r = Region::rectangle(0, 12, 1, 12);  // psi >= 1 excludes the origin
        CHECK(!constrained_passage(f, o, v, r).has_value());
    }
    SUBCASE("band matches enumeration") {
        const Region band = Region::rectangle(0, 12, -2, 2);
        const auto dp = constrained_passage(f, o, v, band);
        const auto bf = brute_force_passage(f, o, v, band);
        REQUIRE(dp.has_value());
        CHECK(dp->first == bf->first);
        CHECK(dp->second.vertices == bf->second.vertices);
    }
    SUBCASE("single-row region is the unique path") {
        const WeightField g = derive_trial_field(3, 5);
        const Point w{5, 0};
        // psi = -x along the row y = 0
        const Region row = Region::rectangle(0, 5, -5, 0);
        const auto bf = brute_force_passage(g, o, w, row);
        double expect = 0.0;
        for (std::int64_t x = 0; x < 5; ++x) expect += g.weight_at(Point{x, 0});
        CHECK(bf->first == expect);
    }
}

TEST_CASE("discounted passage") {
    const WeightField f = derive_trial_field(3, 6);
    const Point v{8, 8};

    SUBCASE("empty discount region reproduces the geodesic") {
        const auto res = discounted_passage(f, o, v, Region::empty());
        const GeodesicPath g = geodesic(f, o, v);
        CHECK(res.first == g.passage_time);
        CHECK(res.second.vertices == g.vertices);
    }
    SUBCASE("whole-plane discount gives time 0 and the tie-break path") {
        const auto res = discounted_passage(f, o, v, Region::whole_plane());
        CHECK(res.first == 0.0);
        // prefer-below backtracking yields the bottom L: right along y=0, then up
        REQUIRE(res.second.vertices.size() == 17);
        for (std::int64_t x = 0; x <= 8; ++x) {
            CHECK(res.second.vertices[static_cast<std::size_t>(x)] == Point{x, 0});
        }
        for (std::int64_t y = 1; y <= 8; ++y) {
            CHECK(res.second.vertices[static_cast<std::size_t>(8 + y)] == Point{8, y});
        }
    }
    SUBCASE("2x2 discounted block matches enumeration") {
        const Region block = Region::rectangle(6, 9, -1, 2);
        const auto dp = discounted_passage(f, o, v, block);
        const auto bf = brute_force_passage(f, o, v, std::nullopt, block);
        CHECK(dp.first == bf->first);
        CHECK(dp.second.vertices == bf->second.vertices);
    }
}

TEST_CASE("oracle suite: 500 random instances with constraints and discounts") {
    const OracleOutcome out = oracle_suite(500, 2024);
    CHECK(out.mismatches == 0);
    CHECK(out.max_rel_err <= 1e-9);
    INFO(out.first_failure);
    CHECK(out.comparisons == 1500);
}

TEST_CASE("superadditivity of passage times") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const WeightField f = derive_trial_field(77, static_cast<std::uint64_t>(i));
        const Point v{static_cast<std::int64_t>(rng() % 40 + 1),
                      static_cast<std::int64_t>(rng() % 40 + 1)};
        const double tuv = last_passage_time(f, o, v);
        for (int k = 0; k < 100; ++k) {
            const Point w{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(v.x + 1)),
                          static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(v.y + 1))};
            const double split = last_passage_time(f, o, w) + last_passage_time(f, w, v);
            CHECK(tuv >= split - 1e-9 * std::max(1.0, tuv));
        }
    }
}

TEST_CASE("monotonicity in weights: restoring discounted weights never lowers T") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        const WeightField f = derive_trial_field(78, static_cast<std::uint64_t>(i));
        const Point v{static_cast<std::int64_t>(rng() % 12 + 2),
                      static_cast<std::int64_t>(rng() % 12 + 2)};
        const std::int64_t m = static_cast<std::int64_t>(rng() % 8);
        const Region block = Region::rectangle(m, m + 3, -2, 2);
        const double discounted = discounted_passage(f, o, v, block).first;
        const double full = last_passage_time(f, o, v);
        CHECK(full >= discounted - 1e-9 * std::max(1.0, full));
    }
}

TEST_CASE("constraint monotonicity on nested bands") {
    const WeightField f = derive_trial_field(79, 0);
    const Point v{30, 30};
    double prev = -1.0;
    for (std::int64_t hw : {1, 2, 3, 5, 8, 13, 30}) {
        const auto res = constrained_passage(f, o, v, Region::rectangle(0, 60, -hw, hw));
        REQUIRE(res.has_value());
        CHECK(res->first >= prev);
        prev = res->first;
    }
    CHECK(prev == last_passage_time(f, o, v));  // widest band covers the box
}

TEST_CASE("geodesic time equals passage time at depth, across the midline splitter") {
    // n = 300 exceeds the full-table threshold, so the recursive reconstruction runs.
    const WeightField f = derive_trial_field(80, 0);
    const Point v{300, 300};
    const GeodesicPath g = geodesic(f, o, v);
    const double t = last_passage_time(f, o, v);
    CHECK(g.passage_time == t);
    CHECK(path_sum(f, g) == g.passage_time);
    REQUIRE(g.vertices.size() == 601);
    for (std::size_t i = 1; i < g.vertices.size(); ++i) {
        const Point d{g.vertices[i].x - g.vertices[i - 1].x,
                      g.vertices[i].y - g.vertices[i - 1].y};
        CHECK((d == Point{1, 0} || d == Point{0, 1}));
    }
}

TEST_CASE("geodesic consistency on asymmetric boxes") {
    const WeightField f = derive_trial_field(81, 0);
    for (const Point v : {Point{500, 40}, Point{40, 500}, Point{260, 270}}) {
        const GeodesicPath g = geodesic(f, o, v);
        CHECK(std::abs(g.passage_time - last_passage_time(f, o, v)) <=
              1e-9 * std::max(1.0, g.passage_time));
    }
}

TEST_CASE("working memory stays O(width)") {
    const WeightField f = derive_trial_field(82, 0);
    SUBCASE("passage time at n = 4096") {
        detail::alloc_reset();
        (void)last_passage_time(f, o, Point{4096, 4096});
        CHECK(detail::alloc_peak_doubles() <= 16 * 4097);
    }
    SUBCASE("geodesic at n = 2048") {
        detail::alloc_reset();
        (void)geodesic(f, o, Point{2048, 2048});
        // frontier arrays plus one bounded base-case table
        CHECK(detail::alloc_peak_doubles() <= (1 << 16) + 64 * 2049);
    }
}

TEST_CASE("brute force rejects oversized instances") {
    const WeightField f = derive_trial_field(83, 0);
    CHECK_THROWS_AS(brute_force_passage(f, o, Point{13, 13}), DomainError);
    CHECK(path_count(o, Point{13, 13}) > 1'000'000);
    CHECK(path_count(o, Point{6, 6}) == 924);
}
