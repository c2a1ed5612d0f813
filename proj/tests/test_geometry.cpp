#include <doctest.h>

#include <cmath>

#include "vvf/geometry.hpp"
#include "vvf/ifs.hpp"
#include "vvf/rng.hpp"

using namespace vvf;

namespace {

AffineMap make_map(double a, double b, double c, double d, double e, double f) {
    AffineMap m;
    m.a = a; m.b = b; m.c = c; m.d = d; m.e = e; m.f = f;
    return m;
}

// First map of the "Up" system: (x/2 + 3y/8 - 1/16, x/2 - 3y/8 + 9/16).
AffineMap up_f1() { return make_map(0.5, 0.375, 0.5, -0.375, -0.0625, 0.5625); }

// Homothety with ratio 1/2 fixed at the origin.
AffineMap sierpinski_f1() { return make_map(0.5, 0.0, 0.0, 0.5, 0.0, 0.0); }

AffineMap random_map(Rng& rng, double scale) {
    auto u = [&] { return scale * (2.0 * rng.next_double() - 1.0); };
    return make_map(u(), u(), u(), u(), u(), u());
}

// Independent maximization of |A u| over unit directions: coarse scan of
// 10^4 angles, then ternary refinement around the best sample.
double direction_scan_lipschitz(const AffineMap& m) {
    const auto stretch = [&](double theta) {
        const double ux = std::cos(theta), uy = std::sin(theta);
        return std::hypot(m.a * ux + m.b * uy, m.c * ux + m.d * uy);
    };
    const int n = 10000;
    const double step = 2.0 * M_PI / n;
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
        const double value = stretch(i * step);
        if (value > best) {
            best = value;
            best_i = i;
        }
    }
    double lo = (best_i - 1) * step, hi = (best_i + 1) * step;
    for (int iter = 0; iter < 200; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (stretch(m1) < stretch(m2))
            lo = m1;
        else
            hi = m2;
    }
    return stretch(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("apply: identity, up-map, homothety") {
    const Point p{0.3, 0.7, {}};
    const Point id = apply(AffineMap{}, p);
    CHECK(id.x == 0.3);
    CHECK(id.y == 0.7);

    const Point at_origin = apply(up_f1(), Point{0.0, 0.0, {}});
    CHECK(at_origin.x == -0.0625);  // -1/16
    CHECK(at_origin.y == 0.5625);   // 9/16

    const Point halved = apply(sierpinski_f1(), Point{1.0, 0.0, {}});
    CHECK(halved.x == 0.5);
    CHECK(halved.y == 0.0);
}

TEST_CASE("apply: color handling") {
    Point p{0.25, 0.5, Rgb{1.0, 0.0, 0.0}};

    SUBCASE("no color part passes color through") {
        const Point q = apply(up_f1(), p);
        REQUIRE(q.color.has_value());
        CHECK((*q.color)[0] == 1.0);
        CHECK((*q.color)[2] == 0.0);
    }
    SUBCASE("color part transforms color") {
        AffineMap m = sierpinski_f1();
        ColorMap cm;
        for (auto& row : cm.linear) row = {0.0, 0.0, 0.0};
        cm.offset = {0.0, 1.0, 0.0};
        m.color_part = cm;
        const Point q = apply(m, p);
        REQUIRE(q.color.has_value());
        CHECK((*q.color)[0] == 0.0);
        CHECK((*q.color)[1] == 1.0);
    }
    SUBCASE("colorless points stay colorless") {
        AffineMap m = sierpinski_f1();
        m.color_part = ColorMap{};
        const Point q = apply(m, Point{0.1, 0.2, {}});
        CHECK(!q.color.has_value());
    }
}

TEST_CASE("lipschitz: exact anchors") {
    CHECK(lipschitz(sierpinski_f1()) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lipschitz(AffineMap{}) == doctest::Approx(1.0).epsilon(1e-15));
    // Up-map linear part has singular values sqrt(1/2) and sqrt(9/32).
    const auto sv = singular_values(up_f1());
    CHECK(sv[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(std::sqrt(9.0 / 32.0)).epsilon(1e-12));
}

TEST_CASE("lipschitz matches the direction-scan oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const AffineMap m = random_map(rng, 1.5);
        CHECK(std::abs(lipschitz(m) - direction_scan_lipschitz(m)) <= 1e-9);
    }
}

TEST_CASE("similitude_ratio: homothety, shear, one-third family") {
    CHECK(similitude_ratio(sierpinski_f1(), 1e-9) == 0.5);
    CHECK(!similitude_ratio(up_f1(), 1e-6).has_value());

    const SuperIfs pair = preset("sierpinski-pair");
    for (const AffineMap& m : pair.ifss[1].maps) {
        const auto r = similitude_ratio(m, 1e-12);
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("property: apply is exactly affine") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const AffineMap m = random_map(rng, 2.0);
        const Point p{rng.next_double(), rng.next_double(), {}};
        const Point q{rng.next_double(), rng.next_double(), {}};
        const double t = rng.next_double();
        const Point mix{t * p.x + (1 - t) * q.x, t * p.y + (1 - t) * q.y, {}};
        const Point lhs = apply(m, mix);
        const Point fp = apply(m, p), fq = apply(m, q);
        CHECK(std::abs(lhs.x - (t * fp.x + (1 - t) * fq.x)) <= 1e-12);
        CHECK(std::abs(lhs.y - (t * fp.y + (1 - t) * fq.y)) <= 1e-12);
    }
}

TEST_CASE("property: similitudes scale all distances by the ratio") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const AffineMap m = similarity_about(0.2 + 0.7 * rng.next_double(),
                                             2.0 * M_PI * rng.next_double(), rng.next_double(),
                                             rng.next_double());
        const auto ratio = similitude_ratio(m, 1e-9);
        REQUIRE(ratio.has_value());
        for (int pair = 0; pair < 20; ++pair) {
            const Point p{rng.next_double(), rng.next_double(), {}};
            const Point q{rng.next_double(), rng.next_double(), {}};
            const Point fp = apply(m, p), fq = apply(m, q);
            const double before = std::hypot(p.x - q.x, p.y - q.y);
            const double after = std::hypot(fp.x - fq.x, fp.y - fq.y);
            CHECK(std::abs(after - *ratio * before) <= 1e-9);
        }
    }
}
