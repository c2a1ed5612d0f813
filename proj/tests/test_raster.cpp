#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "test_support.hpp"
#include "vvf/ifs.hpp"
#include "vvf/raster.hpp"
#include "vvf/rng.hpp"

using namespace vvf;
using vvf_test::sierpinski_subtriangles;
using vvf_test::subtriangle_mass_fractions;

namespace {

const Ifs& sierpinski_half() {
    static const Ifs ifs = preset("sierpinski-half").ifss[0];
    return ifs;
}

Raster disc_raster(int res, double cx, double cy, double radius) {
    Raster r(res, res, RasterKind::set);
    for (int iy = 0; iy < res; ++iy)
        for (int ix = 0; ix < res; ++ix)
            if (std::hypot(r.center_x(ix) - cx, r.center_y(iy) - cy) <= radius) r.at(ix, iy) = 1.0;
    return r;
}

Raster random_set(int w, int h, Rng& rng, double fill) {
    Raster r(w, h, RasterKind::set);
    for (double& cell : r.cells) cell = rng.next_double() < fill ? 1.0 : 0.0;
    return r;
}

// Marks every cell whose center falls in the image of the unit square under
// a homothety: the square [e, e+ratio] x [f, f+ratio].
void mark_square_image(Raster& r, double ratio, double e, double f) {
    for (int iy = 0; iy < r.height; ++iy) {
        const double cy = r.center_y(iy);
        if (cy < f || cy > f + ratio) continue;
        for (int ix = 0; ix < r.width; ++ix) {
            const double cx = r.center_x(ix);
            if (cx >= e && cx <= e + ratio) r.at(ix, iy) = 1.0;
        }
    }
}

bool within_dilation(const Raster& a, const Raster& b, int pixels) {
    return subset_of(a, dilate(b, pixels)) && subset_of(b, dilate(a, pixels));
}

}  // namespace

TEST_CASE("hutchinson_step: empty in, empty out") {
    const Raster empty(64, 64, RasterKind::set);
    CHECK(hutchinson_step(sierpinski_half(), empty).empty());
}

TEST_CASE("hutchinson_step of the full square matches the geometric oracle") {
    const int res = 512;
    const Raster stepped = hutchinson_step(sierpinski_half(), Raster::full_square(res, res));

    Raster oracle(res, res, RasterKind::set);
    const double h = std::sqrt(3.0) / 2.0;
    mark_square_image(oracle, 0.5, 0.0, 0.0);
    mark_square_image(oracle, 0.5, 0.5, 0.0);
    mark_square_image(oracle, 0.5, 0.25, h / 2.0);

    CHECK(within_dilation(stepped, oracle, 1));
}

TEST_CASE("backward process: k=0 echo and fixed point") {
    const Raster start = disc_raster(128, 0.4, 0.6, 0.2);
    const Raster same = backward_process(sierpinski_half(), start, 0);
    CHECK(same.cells == start.cells);

    const int res = 256;
    const Raster fixed = backward_process(sierpinski_half(), Raster::full_square(res, res), 20);
    const Raster once_more = hutchinson_step(sierpinski_half(), fixed);
    CHECK(hausdorff_distance(fixed, once_more) <= 2.0 / res);
}

TEST_CASE("backward process forgets the initial set") {
    const int res = 256;
    const Raster from_square = backward_process(sierpinski_half(), Raster::full_square(res, res), 12);
    const Raster from_blob = backward_process(sierpinski_half(), disc_raster(res, 0.3, 0.7, 0.25), 12);
    CHECK(within_dilation(from_square, from_blob, 2));
}

TEST_CASE("backward census tracks the 3^k squares of side 2^-k") {
    const int res = 1024;
    Raster iterate = Raster::full_square(res, res);
    const double h = std::sqrt(3.0) / 2.0;
    const double fixes[3][2] = {{0, 0}, {1, 0}, {0.5, h}};
    // Corners of the 3^k square images, built by composing the homotheties.
    std::vector<std::pair<double, double>> corners = {{0.0, 0.0}};
    for (int k = 1; k <= 5; ++k) {
        iterate = hutchinson_step(sierpinski_half(), iterate);
        std::vector<std::pair<double, double>> next;
        next.reserve(corners.size() * 3);
        for (const auto& [x, y] : corners)
            for (const auto& fix : fixes)
                next.emplace_back(0.5 * x + 0.5 * fix[0], 0.5 * y + 0.5 * fix[1]);
        corners = std::move(next);

        Raster oracle(res, res, RasterKind::set);
        const double side = std::pow(0.5, k);
        for (const auto& [x, y] : corners) mark_square_image(oracle, side, x, y);

        const auto impl_count = iterate.occupied_count();
        const auto oracle_count = oracle.occupied_count();
        CHECK(std::abs(double(impl_count) - double(oracle_count)) <= 0.02 * double(oracle_count));
        CHECK(within_dilation(iterate, oracle, 2));
    }
}

TEST_CASE("chaos game: invariant-measure masses and determinism") {
    const Ifs& ifs = sierpinski_half();

    SUBCASE("uniform weights split mass evenly") {
        const Raster m = chaos_game(ifs, 1000000, 50, 42, 512, 512);
        CHECK(m.total_mass() == 1000000.0);
        const auto fractions = subtriangle_mass_fractions(m, sierpinski_subtriangles(ifs));
        for (double fraction : fractions) CHECK(std::abs(fraction - 1.0 / 3.0) <= 0.01);
    }
    SUBCASE("weights (1/2,1/4,1/4) give the first subtriangle half the mass") {
        Ifs weighted = ifs;
        weighted.weights = {0.5, 0.25, 0.25};
        const Raster m = chaos_game(weighted, 1000000, 50, 42, 512, 512);
        const auto fractions = subtriangle_mass_fractions(m, sierpinski_subtriangles(ifs));
        CHECK(std::abs(fractions[0] - 0.5) <= 0.01);
        CHECK(std::abs(fractions[1] - 0.25) <= 0.01);
        CHECK(std::abs(fractions[2] - 0.25) <= 0.01);
    }
    SUBCASE("identical seed, identical raster") {
        const Raster a = chaos_game(ifs, 20000, 50, 7, 128, 128);
        const Raster b = chaos_game(ifs, 20000, 50, 7, 128, 128);
        CHECK(a.cells == b.cells);
    }
    SUBCASE("different seeds differ") {
        const Raster a = chaos_game(ifs, 20000, 50, 7, 128, 128);
        const Raster b = chaos_game(ifs, 20000, 50, 8, 128, 128);
        CHECK(a.cells != b.cells);
    }
}

TEST_CASE("chaos-game support lies inside the dilated backward attractor") {
    for (const std::string& name : preset_names()) {
        const SuperIfs s = preset(name);
        for (const Ifs& ifs : s.ifss) {
            const int res = 256;
            const Raster attractor = backward_process(ifs, Raster::full_square(res, res), 20);
            Raster support = chaos_game(ifs, 200000, 50, 5, res, res);
            support.kind = RasterKind::set;
            for (double& cell : support.cells) cell = cell > 0 ? 1.0 : 0.0;
            CHECK_MESSAGE(subset_of(support, dilate(attractor, 2)), name << "/" << ifs.name);
        }
    }
}

TEST_CASE("hausdorff_distance: point cases and errors") {
    const int res = 64;
    Raster a(res, res, RasterKind::set), b(res, res, RasterKind::set);
    a.at(0, 0) = 1.0;
    b.at(0, 0) = 1.0;
    CHECK(hausdorff_distance(a, b) == 0.0);

    Raster c(res, res, RasterKind::set);
    c.at(res - 1, 0) = 1.0;  // (1,0) corner cell
    CHECK(std::abs(hausdorff_distance(a, c) - 1.0) <= 1.0 / res);

    const Raster empty(res, res, RasterKind::set);
    CHECK_THROWS_WITH_AS(hausdorff_distance(a, empty), doctest::Contains("empty set"),
                         std::invalid_argument);
    CHECK_THROWS_AS(hausdorff_distance(a, Raster(32, 32, RasterKind::set)),
                    std::invalid_argument);
}

TEST_CASE("squared_distance_map matches brute force on random rasters") {
    Rng rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        const int w = 9 + static_cast<int>(rng.next_index(24));
        const int h = 5 + static_cast<int>(rng.next_index(20));
        const Raster r = random_set(w, h, rng, trial == 0 ? 0.0 : 0.08);
        const auto fast = squared_distance_map(r);
        for (int iy = 0; iy < h; ++iy) {
            for (int ix = 0; ix < w; ++ix) {
                double best = std::numeric_limits<double>::infinity();
                for (int jy = 0; jy < h; ++jy)
                    for (int jx = 0; jx < w; ++jx)
                        if (r.at(jx, jy) > 0) {
                            const double dx = (ix - jx) / double(w);
                            const double dy = (iy - jy) / double(h);
                            best = std::min(best, dx * dx + dy * dy);
                        }
                const double got = fast[std::size_t(iy) * w + ix];
                if (std::isinf(best))
                    CHECK(std::isinf(got));
                else
                    CHECK(got == doctest::Approx(best).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("converged backward raster is mirror-symmetric with frozen census") {
    // The triangle is symmetric under x -> 1-x and so is the pixel-center
    // dynamic (map 1 and map 2 swap, map 3 is its own mirror), so the
    // converged raster must equal its mirror image exactly.
    const Raster r = backward_process(sierpinski_half(), Raster::full_square(48, 48), 16);
    for (int iy = 0; iy < 48; ++iy)
        for (int ix = 0; ix < 48; ++ix) CHECK(r.at(ix, iy) == r.at(47 - ix, iy));
    CHECK(r.occupied_count() == 676);
    CHECK(r.at(0, 0) == 1.0);   // bottom row is part of the attractor
    CHECK(r.at(24, 25) == 0.0); // central hole stays empty
}

TEST_CASE("backward iterates contract in the Hausdorff metric") {
    struct Case {
        const char* preset_name;
        int ifs_index;
    };
    const Case cases[] = {{"sierpinski-half", 0}, {"up-down", 0}, {"up-down", 1},
                          {"fern-lettuce", 0},    {"fern-lettuce", 1}};
    for (const Case& c : cases) {
        const SuperIfs s = preset(c.preset_name);
        const Ifs& ifs = s.ifss[c.ifs_index];
        double ratio = 0.0;
        for (const AffineMap& m : ifs.maps) ratio = std::max(ratio, lipschitz(m));

        const int res = 256;
        Raster prev = Raster::full_square(res, res);
        Raster current = hutchinson_step(ifs, prev);
        double d_prev = hausdorff_distance(current, prev);
        for (int k = 2; k <= 10; ++k) {
            Raster next = hutchinson_step(ifs, current);
            const double d = hausdorff_distance(next, current);
            CHECK_MESSAGE(d <= ratio * d_prev + 2.0 / res,
                          c.preset_name << "/" << ifs.name << " step " << k);
            prev = std::move(current);
            current = std::move(next);
            d_prev = d;
        }
    }
}
