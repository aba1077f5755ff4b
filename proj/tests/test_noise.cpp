#include <doctest.h>

#include <cstdio>

#include "helpers.hpp"
#include "lutforge/noise.hpp"

using namespace lutforge;

TEST_CASE("weight_map_uniform") {
    const WeightMap one = weight_map_uniform(1, 1, 1.0);
    CHECK(one.data.size() == 3);
    CHECK(one.data[0] == 1.0);
    const WeightMap zero = weight_map_uniform(2, 3, 0.0);
    for (double v : zero.data) CHECK(v == 0.0);
    const WeightMap big = weight_map_uniform(4, 4, 2.5);
    for (double v : big.data) CHECK(v == 2.5);
    CHECK_THROWS_AS(weight_map_uniform(2, 2, -0.1), std::invalid_argument);
}

TEST_CASE("suppress") {
    auto gen = testutil::rng(404);
    const Image img = testutil::random_image(6, 6, gen);
    const Lut3D identity = Lut3D::identity(17, ValueRange::Unit);

    SUBCASE("identity NLUT with unit weights is identity") {
        const SuppressResult r = suppress(identity, img, weight_map_uniform(6, 6, 1.0));
        for (std::size_t i = 0; i < img.data.size(); ++i)
            CHECK(std::abs(r.image.data[i] - img.data[i]) < 1e-9);
    }
    SUBCASE("half weights halve the output") {
        const SuppressResult r = suppress(identity, img, weight_map_uniform(6, 6, 0.5));
        for (std::size_t i = 0; i < img.data.size(); ++i)
            CHECK(std::abs(r.image.data[i] - 0.5 * img.data[i]) < 1e-9);
    }
    SUBCASE("matches lookup-then-multiply oracle") {
        const Lut3D lut = testutil::random_lut(9, ValueRange::Unit, gen);
        Image m = testutil::random_image(6, 6, gen);
        for (double& v : m.data) v *= 2.0;
        const SuppressResult r = suppress(lut, img, m);
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 6; ++x) {
                double lk[3];
                testutil::naive_trilinear(lut, img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2), lk);
                for (int c = 0; c < 3; ++c) {
                    const double pre = lk[c] * m.at(y, x, c);
                    CHECK(std::abs(r.pre_clamp.at(y, x, c) - pre) < 1e-12);
                    CHECK(r.image.at(y, x, c) ==
                          std::clamp(r.pre_clamp.at(y, x, c), 0.0, 1.0));
                }
            }
    }
    SUBCASE("lean variant is bit-identical to the full result") {
        const Lut3D lut = testutil::random_lut(9, ValueRange::Unit, gen);
        Image m = testutil::random_image(6, 6, gen);
        for (double& v : m.data) v *= 2.0;
        const SuppressResult full = suppress(lut, img, m);
        const Image lean = suppress_image(lut, img, m);
        for (std::size_t i = 0; i < img.data.size(); ++i)
            CHECK(full.image.data[i] == lean.data[i]);
    }
    SUBCASE("monotone in m before clamping") {
        const Lut3D lut = testutil::random_lut(9, ValueRange::Unit, gen);
        const SuppressResult lo = suppress(lut, img, weight_map_uniform(6, 6, 0.7));
        const SuppressResult hi = suppress(lut, img, weight_map_uniform(6, 6, 1.4));
        for (std::size_t i = 0; i < img.data.size(); ++i)
            CHECK(hi.pre_clamp.data[i] >= lo.pre_clamp.data[i] - 1e-15);
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS_AS(suppress(identity, img, weight_map_uniform(5, 6, 1.0)),
                        std::invalid_argument);
    }
    SUBCASE("wrong range tag rejected") {
        const Lut3D llut = Lut3D::identity(9, ValueRange::Signed);
        CHECK_THROWS_AS(suppress(llut, img, weight_map_uniform(6, 6, 1.0)), std::invalid_argument);
    }
}

TEST_CASE("WMAP round trip") {
    auto gen = testutil::rng(505);
    WeightMap m = testutil::random_image(4, 5, gen);
    for (double& v : m.data) v = static_cast<float>(2.0 * v);
    const std::string path = "test_map.wmap";
    save_wmap(m, path);
    const WeightMap back = load_wmap(path);
    CHECK(back.h == 4);
    CHECK(back.w == 5);
    for (std::size_t i = 0; i < m.data.size(); ++i) CHECK(back.data[i] == m.data[i]);
    std::remove(path.c_str());
}

TEST_CASE("noise schedule invariants") {
    const NoiseSchedule s = NoiseSchedule::linear();
    CHECK(s.total_steps() == 1000);
    for (int t = 1; t < s.total_steps(); ++t) CHECK(s.alpha_bar[t] < s.alpha_bar[t - 1]);
    CHECK(s.alpha_bar.back() > 0.0);
    CHECK_THROWS_AS(NoiseSchedule({0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(NoiseSchedule({}), std::invalid_argument);
}

TEST_CASE("forward_noise") {
    const NoiseSchedule s = NoiseSchedule::linear();
    Image img(4, 4, 0.5);

    SUBCASE("t out of range rejected") {
        CHECK_THROWS_AS(forward_noise(img, -1, s, 0), std::invalid_argument);
        CHECK_THROWS_AS(forward_noise(img, 1000, s, 0), std::invalid_argument);
    }
    SUBCASE("t=0 is nearly noise-free") {
        const Image out = forward_noise(img, 0, s, 7);
        for (double v : out.data) CHECK(std::abs(v - 0.5) < 0.1);
    }
    SUBCASE("deep t is noise dominated") {
        const Image out = forward_noise(img, 999, s, 7);
        // alpha_bar ~ 0: output is clamped unit Gaussian, mean pulled to ~0.4
        double mean = 0.0;
        for (double v : out.data) mean += v;
        mean /= out.data.size();
        CHECK(s.alpha_bar[999] < 1e-3);
        CHECK(mean < 0.7);
    }
    SUBCASE("seeded reproducibility and seed decorrelation") {
        const Image a = forward_noise(img, 500, s, 123);
        const Image b = forward_noise(img, 500, s, 123);
        for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
        const Image c = forward_noise(img, 500, s, 124);
        int differing = 0;
        for (std::size_t i = 0; i < a.data.size(); ++i)
            if (a.data[i] != c.data[i]) ++differing;
        CHECK(differing > static_cast<int>(a.data.size() / 2));
    }
    SUBCASE("empirical mean approaches sqrt(alpha_bar) * value") {
        // early-schedule t keeps the clamp bias small
        const int t = 100;
        const double expect = std::sqrt(s.alpha_bar[t]) * 0.5;
        Image big(64, 64, 0.5);
        double sum = 0.0;
        int n = 0;
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const Image out = forward_noise(big, t, s, seed);
            for (double v : out.data) {
                sum += v;
                ++n;
            }
        }
        const double mean = sum / n;
        const double sigma = std::sqrt(1.0 - s.alpha_bar[t]);
        CHECK(std::abs(mean - expect) < 3.0 * sigma / std::sqrt(static_cast<double>(n)) + 0.01);
    }
}
