#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "vitaslam/simulator.hpp"
#include "vitaslam/visual.hpp"

using namespace vitaslam;

namespace {

RgbImage solid_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RgbImage img;
    img.width = w;
    img.height = h;
    img.pixels.reserve(static_cast<std::size_t>(w) * h * 3);
    for (int i = 0; i < w * h; ++i) {
        img.pixels.push_back(r);
        img.pixels.push_back(g);
        img.pixels.push_back(b);
    }
    return img;
}

std::vector<double> random_profile(std::mt19937_64& rng, int len) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(len));
    for (double& v : p) v = U(rng);
    return p;
}

} // namespace

TEST_CASE("grayscale conversion uses Rec.601 luma") {
    const GrayImage black = to_grayscale(solid_image(4, 3, 0, 0, 0));
    for (double v : black.intensity) CHECK(v == 0.0);

    const GrayImage white = to_grayscale(solid_image(4, 3, 255, 255, 255));
    for (double v : white.intensity) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    const GrayImage red = to_grayscale(solid_image(2, 2, 255, 0, 0));
    for (double v : red.intensity) CHECK(v == doctest::Approx(0.299).epsilon(1e-12));

    const GrayImage mix = to_grayscale(solid_image(1, 1, 0, 255, 0));
    CHECK(mix.at(0, 0) == doctest::Approx(0.587).epsilon(1e-12));
}

TEST_CASE("grayscale conversion rejects malformed images") {
    CHECK_THROWS_AS(to_grayscale(RgbImage{}), std::invalid_argument);
    RgbImage bad = solid_image(4, 4, 10, 10, 10);
    bad.pixels.pop_back();
    CHECK_THROWS_AS(to_grayscale(bad), std::invalid_argument);
}

TEST_CASE("profile extraction normalizes the mean to 0.5") {
    SUBCASE("uniform image gives a flat profile at exactly 0.5") {
        const GrayImage gray = to_grayscale(solid_image(16, 8, 120, 120, 120));
        for (double v : extract_view_template(gray, 8)) CHECK(v == 0.5);
    }
    SUBCASE("half dark, half bright splits around the mean") {
        RgbImage img = solid_image(8, 4, 0, 0, 0);
        for (int row = 0; row < 4; ++row)
            for (int col = 4; col < 8; ++col)
                for (int ch = 0; ch < 3; ++ch)
                    img.pixels[static_cast<std::size_t>((row * 8 + col) * 3 + ch)] = 255;
        const std::vector<double> p = extract_view_template(to_grayscale(img), 2);
        REQUIRE(p.size() == 2);
        CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-9));
        CHECK(p[0] < p[1]);
    }
    SUBCASE("a global brightness shift cancels out") {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> px(0, 200);
        RgbImage a = solid_image(32, 8, 0, 0, 0);
        for (auto& v : a.pixels) v = static_cast<std::uint8_t>(px(rng));
        RgbImage b = a;
        for (auto& v : b.pixels) v = static_cast<std::uint8_t>(v + 40);
        const std::vector<double> pa = extract_view_template(to_grayscale(a), 16);
        const std::vector<double> pb = extract_view_template(to_grayscale(b), 16);
        for (std::size_t i = 0; i < pa.size(); ++i) CHECK(std::fabs(pa[i] - pb[i]) <= 1e-9);
    }
}

TEST_CASE("profile extraction rejects bad sizes") {
    const GrayImage gray = to_grayscale(solid_image(8, 4, 50, 50, 50));
    CHECK_THROWS_AS(extract_view_template(gray, 0), std::invalid_argument);
    CHECK_THROWS_AS(extract_view_template(gray, 9), std::invalid_argument);
}

TEST_CASE("profile of the first simulated frame matches the stored snapshot") {
    // Frozen output of the default-config simulator at cycle 0; any change to
    // the renderer, the trajectory or the profile extraction shows up here.
    std::ifstream fixture(std::string(VITASLAM_FIXTURE_DIR) + "/golden_profile.csv");
    REQUIRE(fixture.good());
    std::vector<double> want;
    std::string line;
    while (std::getline(fixture, line))
        if (!line.empty()) want.push_back(std::strtod(line.c_str(), nullptr));
    REQUIRE(want.size() == 48);

    Simulator sim((SimulatorConfig()));
    const SensorFrame f = sim.frame(0);
    const std::vector<double> got = extract_view_template(to_grayscale(f.rgb), 48);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
}

TEST_CASE("profile distance is a symmetric premetric at zero shift") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> a = random_profile(rng, 24);
        const std::vector<double> b = random_profile(rng, 24);
        CHECK(profile_distance(a, a, 0) == 0.0);
        CHECK(profile_distance(a, b, 0) == profile_distance(b, a, 0));
        CHECK(profile_distance(a, b, 0) >= 0.0);
    }
    CHECK_THROWS_AS(profile_distance(random_profile(rng, 8), random_profile(rng, 9), 0),
                    std::invalid_argument);
}

TEST_CASE("best shift distance finds circular rotations") {
    std::mt19937_64 rng(7);
    const std::vector<double> base = random_profile(rng, 32);
    for (int rot = -4; rot <= 4; ++rot) {
        std::vector<double> rolled(base.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            rolled[i] = base[(i + base.size() + static_cast<std::size_t>(rot + 32)) % base.size()];
        CHECK(best_shift_distance(rolled, base, 4) == 0.0);
    }
}

TEST_CASE("view template matching follows the store contract") {
    std::mt19937_64 rng(7);
    std::vector<ViewTemplate> store;
    for (int id = 0; id < 3; ++id)
        store.push_back(ViewTemplate{id, random_profile(rng, 32), CellCoords{}});

    SUBCASE("empty store is always novel with the next id 0") {
        const MatchResult r = match_view_template(store[0].profile, {}, 0.1, 4);
        CHECK(r.kind == MatchResult::Kind::Novel);
        CHECK(r.id == 0);
    }
    SUBCASE("a stored profile matches itself at distance zero") {
        const MatchResult r = match_view_template(store[2].profile, store, 0.01, 4);
        CHECK(r.kind == MatchResult::Kind::Matched);
        CHECK(r.id == 2);
        CHECK(r.distance == 0.0);
    }
    SUBCASE("a rotated copy within max_shift still matches") {
        std::vector<double> rolled(store[1].profile.size());
        for (std::size_t i = 0; i < rolled.size(); ++i)
            rolled[i] = store[1].profile[(i + 2) % rolled.size()];
        const MatchResult r = match_view_template(rolled, store, 0.01, 4);
        CHECK(r.kind == MatchResult::Kind::Matched);
        CHECK(r.id == 1);
        CHECK(r.distance == 0.0);
    }
    SUBCASE("distance ties go to the lowest template id") {
        std::vector<ViewTemplate> twins;
        twins.push_back(ViewTemplate{0, store[0].profile, CellCoords{}});
        twins.push_back(ViewTemplate{1, store[0].profile, CellCoords{}});
        const MatchResult r = match_view_template(store[0].profile, twins, 0.01, 4);
        CHECK(r.kind == MatchResult::Kind::Matched);
        CHECK(r.id == 0);
    }
    SUBCASE("an unseen profile is novel and carries the append id") {
        const MatchResult r = match_view_template(random_profile(rng, 32), store, 0.01, 4);
        CHECK(r.kind == MatchResult::Kind::Novel);
        CHECK(r.id == 3);
        CHECK(r.distance > 0.01);
    }
    SUBCASE("a near-zero threshold keeps every distinct profile novel") {
        // The matcher requires a strictly positive threshold, so the
        // "appearance never trusted" regime is a denormal-small one.
        for (int trial = 0; trial < 20; ++trial) {
            const MatchResult r = match_view_template(random_profile(rng, 32), store, 1e-300, 4);
            CHECK(r.kind == MatchResult::Kind::Novel);
        }
    }
    SUBCASE("non-positive thresholds are rejected") {
        CHECK_THROWS_AS(match_view_template(store[0].profile, store, 0.0, 4),
                        std::invalid_argument);
        CHECK_THROWS_AS(match_view_template(store[0].profile, store, -1.0, 4),
                        std::invalid_argument);
    }
}

TEST_CASE("view template store assigns consecutive ids") {
    std::mt19937_64 rng(31);
    ViewTemplateStore store(0.01, 4);
    const std::vector<double> p0 = random_profile(rng, 16);
    const std::vector<double> p1 = random_profile(rng, 16);
    CHECK(store.add(p0, CellCoords{1, 2, 3}) == 0);
    CHECK(store.add(p1, CellCoords{4, 5, 6}) == 1);
    CHECK(store.size() == 2);
    const MatchResult r = store.match(p1);
    CHECK(r.kind == MatchResult::Kind::Matched);
    CHECK(r.id == 1);
}
