#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "lutforge/imgio.hpp"

using namespace lutforge;

TEST_CASE("PPM round trip") {
    const std::string path = "test_img.ppm";
    {
        std::ofstream os(path, std::ios::binary);
        os << "P6\n2 2\n255\n";
        const unsigned char px[12] = {255, 0, 128, 0, 0, 0, 255, 255, 255, 10, 20, 30};
        os.write(reinterpret_cast<const char*>(px), 12);
    }
    const Image img = load_image(path);
    CHECK(img.h == 2);
    CHECK(img.w == 2);
    CHECK(img.at(0, 0, 0) == 1.0);
    CHECK(img.at(0, 0, 1) == 0.0);
    CHECK(img.at(0, 0, 2) == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
    std::remove(path.c_str());
}

TEST_CASE("PNG round trip is exact on 8-bit images") {
    auto gen = testutil::rng(2001);
    Image img = testutil::random_image(13, 17, gen);
    for (double& v : img.data) v = std::round(v * 255.0) / 255.0; // 8-bit representable
    const std::string path = "test_img.png";
    save_image(img, path);
    const Image back = load_image(path);
    CHECK(back.h == img.h);
    CHECK(back.w == img.w);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(back.data[i] == doctest::Approx(img.data[i]).epsilon(1e-12));
    std::remove(path.c_str());
}

TEST_CASE("quantization error bound") {
    auto gen = testutil::rng(2002);
    const Image img = testutil::random_image(9, 9, gen);
    const std::string path = "test_quant.ppm";
    save_image(img, path);
    const Image back = load_image(path);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(img.data[i] - back.data[i]) <= 1.0 / 510.0 + 1e-12);
    std::remove(path.c_str());
}

TEST_CASE("save is byte-deterministic") {
    auto gen = testutil::rng(2003);
    const Image img = testutil::random_image(8, 8, gen);
    for (const char* path : {"test_det.png", "test_det.ppm"}) {
        save_image(img, path);
        std::ifstream a(path, std::ios::binary);
        const std::string first((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        save_image(img, path);
        std::ifstream b(path, std::ios::binary);
        const std::string second((std::istreambuf_iterator<char>(b)),
                                 std::istreambuf_iterator<char>());
        CHECK(first == second);
        std::remove(path);
    }
}

TEST_CASE("format errors carry detail") {
    const std::string path = "test_bad.ppm";
    {
        std::ofstream os(path, std::ios::binary);
        os << "P5\n2 2\n255\n";
    }
    CHECK_THROWS_WITH_AS(load_image(path), doctest::Contains("P6"), std::runtime_error);
    {
        std::ofstream os(path, std::ios::binary);
        os << "P6\n2 2\n255\nxx";
    }
    CHECK_THROWS_WITH_AS(load_image(path), doctest::Contains("truncated"), std::runtime_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_image("test_missing.png"), std::runtime_error);
    CHECK_THROWS_AS(load_image("test_img.bmp"), std::runtime_error);
}
