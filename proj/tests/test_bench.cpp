#include <doctest.h>

#include <chrono>
#include <thread>

#include "lutforge/bench.hpp"
#include "lutforge/synth.hpp"

using namespace lutforge;

TEST_CASE("measure statistics") {
    SUBCASE("repeat=1 collapses the statistics") {
        const TimingStats s = measure([] {}, 0, 1);
        CHECK(s.samples_ms.size() == 1);
        CHECK(s.min_ms == s.median_ms);
        CHECK(s.median_ms == s.mean_ms);
        CHECK(s.stddev_ms == 0.0);
    }
    SUBCASE("a ~5ms sleep lands in a sane band") {
        const TimingStats s = measure(
            [] { std::this_thread::sleep_for(std::chrono::milliseconds(5)); }, 1, 5);
        CHECK(s.median_ms >= 4.0);
        CHECK(s.median_ms <= 50.0);
        CHECK(s.min_ms >= 0.0);
    }
    SUBCASE("repeat below 1 rejected") {
        CHECK_THROWS_AS(measure([] {}, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("scaling_check flags super-linear growth") {
    const ScalingReport ok = scaling_check({{"a", 1000, 1.0}, {"b", 4000, 4.5}});
    REQUIRE(ok.ratios.size() == 1);
    CHECK(ok.ratios[0].pixel_ratio == doctest::Approx(4.0));
    CHECK_FALSE(ok.ratios[0].super_linear);

    const ScalingReport bad = scaling_check({{"a", 1000, 1.0}, {"b", 4000, 6.0}});
    CHECK(bad.ratios[0].super_linear);
}

TEST_CASE("value noise synthesis is deterministic with the requested mean") {
    const Image a = synth_value_noise(64, 64, 3, 0.1, 0.08);
    const Image b = synth_value_noise(64, 64, 3, 0.1, 0.08);
    for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
    double mean = 0.0;
    for (double v : a.data) mean += v;
    mean /= a.data.size();
    CHECK(mean == doctest::Approx(0.1).epsilon(0.3));
    for (double v : a.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    const Image c = synth_value_noise(64, 64, 4, 0.1, 0.08);
    int differing = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (a.data[i] != c.data[i]) ++differing;
    CHECK(differing > 1000);
}
