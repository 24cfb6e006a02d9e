#include <doctest.h>

#include <random>

#include "dipole/core.hpp"
#include "support/oracles.hpp"

using namespace dipole;
using dipole::testing::random_image;

namespace {

GrayImage make(std::size_t w, std::size_t h, std::vector<std::uint8_t> px) { return GrayImage(w, h, std::move(px)); }

const GrayImage kVerticalEdge = make(2, 2, {0, 255, 0, 255});
const GrayImage kHorizontalEdge = make(2, 2, {0, 0, 255, 255});

void check_against_reference(const VectorField& got, const std::vector<dipole::testing::RefDipole>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
        REQUIRE(std::abs(got.xs()[k] - want[k].px) <= tol * std::max(1.0, std::abs(want[k].px)));
        REQUIRE(std::abs(got.ys()[k] - want[k].py) <= tol * std::max(1.0, std::abs(want[k].py)));
    }
}

}  // namespace

TEST_CASE("Window parsing") {
    CHECK(Window::parse("2x2") == Window::block2x2());
    CHECK(Window::parse("r3x2") == Window::radius(3, 2));
    CHECK(Window::parse("r3x2").to_string() == "r3x2");
    for (const char* bad : {"", "r", "rx", "r0x1", "r1x", "3x3", "r1x1x1", "r-1x1", "r1y1"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Window::parse(bad), std::invalid_argument);
    }
}

TEST_CASE("GrayImage rejects inconsistent buffers") {
    CHECK_THROWS_AS(GrayImage(0, 3), DimensionError);
    CHECK_THROWS_AS(GrayImage(2, 2, std::vector<std::uint8_t>(3)), DimensionError);
    CHECK_THROWS_AS(ScalarField(1, 1, std::vector<double>{std::nan("")}), std::invalid_argument);
}

TEST_CASE("local_mean") {
    SUBCASE("2x2 block over a vertical edge") {
        CHECK(local_mean(kVerticalEdge, Window::block2x2())(0, 0) == 127.5);
    }
    SUBCASE("uniform image") {
        const GrayImage img(7, 5, 50);
        for (const auto& win : {Window::block2x2(), Window::radius(1, 1), Window::radius(3, 2)}) {
            const ScalarField m = local_mean(img, win);
            for (double v : m.values()) CHECK(v == 50.0);
        }
    }
    SUBCASE("center spike, radius 1") {
        GrayImage img(3, 3, 0);
        img(1, 1) = 9;
        CHECK(local_mean(img, Window::radius(1, 1))(1, 1) == 1.0);
    }
    SUBCASE("clipped radius windows average only in-frame pixels") {
        const GrayImage img = make(3, 1, {0, 30, 90});
        const ScalarField m = local_mean(img, Window::radius(1, 1));
        CHECK(m(0, 0) == 15.0);
        CHECK(m(0, 1) == 40.0);
        CHECK(m(0, 2) == 60.0);
    }
    SUBCASE("too small for a 2x2 block") {
        CHECK_THROWS_WITH_AS(local_mean(GrayImage(1, 5), Window::block2x2()),
                             doctest::Contains("minimum size is 2x2"), DimensionError);
    }
}

TEST_CASE("charge_map") {
    SUBCASE("uniform image has no charge") {
        const ScalarField q = charge_map(GrayImage(6, 4, 77), Window::radius(2, 1));
        for (double v : q.values()) CHECK(v == 0.0);
    }
    SUBCASE("vertical edge, 2x2 block") {
        const ScalarField q = charge_map(kVerticalEdge, Window::block2x2());
        CHECK(std::vector<double>(q.values().begin(), q.values().end()) ==
              std::vector<double>{-127.5, 127.5, -127.5, 127.5});
    }
    SUBCASE("brightness offset does not change charges") {
        std::mt19937 rng(11);
        const GrayImage img = random_image(rng, 9, 7, 0, 200);
        GrayImage shifted = img;
        for (auto& p : shifted.pixels()) p = static_cast<std::uint8_t>(p + 55);
        for (const auto& win : {Window::block2x2(), Window::radius(2, 2)}) {
            const auto a = charge_map(img, win);
            const auto b = charge_map(shifted, win);
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.values()[k] == doctest::Approx(b.values()[k]));
        }
    }
    SUBCASE("charges stay within a byte range") {
        std::mt19937 rng(5);
        const auto q = charge_map(random_image(rng, 16, 16), Window::radius(3, 3));
        for (double v : q.values()) {
            CHECK(v >= -255.0);
            CHECK(v <= 255.0);
        }
    }
}

TEST_CASE("dipole_field examples") {
    for (bool fast : {false, true}) {
        CAPTURE(fast);
        auto field = [&](const GrayImage& img, const Window& win) {
            return fast ? dipole_field_fast(img, win) : dipole_field(img, win);
        };
        {  // vertical edge points toward the bright column
            const VectorField p = field(kVerticalEdge, Window::block2x2());
            CHECK(p.x(0, 0) == 63.75);
            CHECK(p.y(0, 0) == 0.0);
        }
        {  // horizontal edge points toward the bright row
            const VectorField p = field(kHorizontalEdge, Window::block2x2());
            CHECK(p.x(0, 0) == 0.0);
            CHECK(p.y(0, 0) == 63.75);
        }
        {  // uniform image gives a zero field
            for (const auto& win : {Window::block2x2(), Window::radius(2, 3)}) {
                const VectorField p = field(GrayImage(8, 6, 123), win);
                for (double v : p.xs()) CHECK(v == 0.0);
                for (double v : p.ys()) CHECK(v == 0.0);
            }
        }
        {  // 2x2 block leaves the last row and column at zero
            std::mt19937 rng(3);
            const VectorField p = field(random_image(rng, 5, 4), Window::block2x2());
            for (std::size_t r = 0; r < 4; ++r) CHECK((p.x(r, 4) == 0.0 && p.y(r, 4) == 0.0));
            for (std::size_t c = 0; c < 5; ++c) CHECK((p.x(3, c) == 0.0 && p.y(3, c) == 0.0));
        }
        {  // single-pixel image has a zero dipole
            const VectorField p = field(GrayImage(1, 1, 200), Window::radius(2, 2));
            CHECK(p.x(0, 0) == 0.0);
            CHECK(p.y(0, 0) == 0.0);
        }
    }
}

TEST_CASE("dipole_field matches the brute-force reference") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const GrayImage img = random_image(rng, 13 + trial, 11);
        check_against_reference(dipole_field(img, Window::block2x2()), dipole::testing::reference_block_field(img), 1e-9);
        for (std::size_t di : {1u, 2u, 4u}) {
            for (std::size_t dj : {1u, 3u}) {
                const auto want = dipole::testing::reference_radius_field(img, di, dj);
                check_against_reference(dipole_field(img, Window::radius(di, dj)), want, 1e-9);
                check_against_reference(dipole_field_fast(img, Window::radius(di, dj)), want, 1e-9);
            }
        }
    }
}

TEST_CASE("fast and direct paths agree bitwise and ignore thread count") {
    std::mt19937 rng(99);
    const GrayImage img = random_image(rng, 97, 83);
    for (const auto& win : {Window::block2x2(), Window::radius(1, 1), Window::radius(5, 2)}) {
        const VectorField direct = dipole_field(img, win, {1});
        CHECK(dipole_field_fast(img, win, {1}) == direct);
        CHECK(dipole_field_fast(img, win, {7}) == direct);
        CHECK(dipole_field(img, win, {5}) == direct);
    }
}

TEST_CASE("window geometry") {
    SUBCASE("radius windows clip at the border") {
        const Rect r = mean_window(Window::radius(2, 1), 10, 6, 0, 9);
        CHECK(r == Rect{0, 8, 2, 9});
        CHECK(r.count() == 6);
    }
    SUBCASE("2x2 mean windows shift inside on the last row and column") {
        CHECK(mean_window(Window::block2x2(), 4, 3, 2, 3) == Rect{1, 2, 2, 3});
        CHECK(!dipole_window(Window::block2x2(), 4, 3, 2, 3).has_value());
        CHECK(dipole_window(Window::block2x2(), 4, 3, 1, 2) == Rect{1, 2, 2, 3});
    }
}

TEST_CASE("magnitude_field") {
    const VectorField f(3, 1, {3.0, 0.0, 63.75}, {4.0, 0.0, 0.0});
    const ScalarField m = magnitude_field(f);
    CHECK(m(0, 0) == 5.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(0, 2) == 63.75);
}

TEST_CASE("whole_image_dipole") {
    const Dipole d = whole_image_dipole(make(2, 1, {0, 255}));
    CHECK(d.px == 127.5);
    CHECK(d.py == 0.0);
    CHECK(whole_image_dipole(GrayImage(1, 1, 77)) == Dipole{0.0, 0.0});
    CHECK(whole_image_dipole(GrayImage(9, 4, 0)) == Dipole{0.0, 0.0});
    const Dipole v = whole_image_dipole(make(1, 2, {0, 255}));
    CHECK(v.px == 0.0);
    CHECK(v.py == 127.5);
}
