#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "lutforge/losses.hpp"

using namespace lutforge;

namespace {

// FD check of an image-gradient against a scalar functional; skips
// coordinates whose analytic gradient is ~0 together with a tiny FD value
// (nondifferentiable ties are perturbed away by callers).
template <typename F>
void check_gradient(Image& img, const Image& grad, F&& value, double tol, int samples = 40) {
    auto gen = testutil::rng(424242);
    std::uniform_int_distribution<std::size_t> pick(0, img.data.size() - 1);
    for (int s = 0; s < samples; ++s) {
        const std::size_t i = pick(gen);
        const double fd = testutil::central_diff([&] { return value(); }, img.data[i]);
        if (std::abs(grad.data[i]) < 1e-12 && std::abs(fd) < 1e-7) continue;
        CHECK(testutil::rel_err(fd, grad.data[i]) < tol);
    }
}

} // namespace

TEST_CASE("exposure loss") {
    SUBCASE("constant at the target is zero") {
        CHECK(exposure_loss(Image(32, 32, 0.65)).value == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("constant 0.45 deviates by 0.04") {
        CHECK(exposure_loss(Image(32, 32, 0.45)).value == doctest::Approx(0.04).epsilon(1e-12));
    }
    SUBCASE("matches a brute-force block loop and finite differences") {
        auto gen = testutil::rng(31);
        Image img = testutil::random_image(32, 32, gen);
        const LossValue lv = exposure_loss(img);
        // block-loop oracle
        double expect = 0.0;
        for (int by = 0; by < 2; ++by)
            for (int bx = 0; bx < 2; ++bx) {
                double sum = 0.0;
                for (int y = by * 16; y < by * 16 + 16; ++y)
                    for (int x = bx * 16; x < bx * 16 + 16; ++x)
                        sum += (img.at(y, x, 0) + img.at(y, x, 1) + img.at(y, x, 2)) / 3.0;
                const double vi = sum / 256.0;
                expect += (vi - 0.65) * (vi - 0.65);
            }
        expect /= 4.0;
        CHECK(std::abs(lv.value - expect) < 1e-12);
        check_gradient(img, lv.grad, [&] { return exposure_loss(img).value; }, 1e-5);
    }
    SUBCASE("partial edge blocks each contribute one term") {
        // 20x20 with region 16 -> 4 blocks of sizes 16x16, 16x4, 4x16, 4x4
        Image img(20, 20, 0.25);
        const LossValue lv = exposure_loss(img);
        CHECK(lv.value == doctest::Approx(0.16).epsilon(1e-12));
        check_gradient(img, lv.grad, [&] { return exposure_loss(img).value; }, 1e-5, 20);
    }
    SUBCASE("invariant under whole-block permutation") {
        auto gen = testutil::rng(32);
        Image img = testutil::random_image(32, 32, gen);
        Image swapped = img;
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x)
                for (int c = 0; c < 3; ++c)
                    std::swap(swapped.at(y, x, c), swapped.at(y + 16, x + 16, c));
        CHECK(exposure_loss(img).value == doctest::Approx(exposure_loss(swapped).value).epsilon(1e-12));
    }
}

TEST_CASE("structural loss") {
    auto gen = testutil::rng(41);
    SUBCASE("identical and scaled images give zero") {
        const Image img = testutil::random_image(8, 8, gen);
        CHECK(structural_loss(img, img).value == doctest::Approx(0.0).epsilon(1e-15));
        Image doubled(8, 8);
        for (std::size_t i = 0; i < img.data.size(); ++i) doubled.data[i] = 2.0 * img.data[i];
        CHECK(structural_loss(img, doubled).value < 1e-12);
    }
    SUBCASE("matches a naive-DFT phase oracle") {
        const Image a = testutil::random_image(8, 8, gen);
        const Image b = testutil::random_image(8, 8, gen);
        double expect = 0.0;
        for (int c = 0; c < 3; ++c) {
            const auto sa = testutil::naive_dft2_channel(a, c);
            const auto sb = testutil::naive_dft2_channel(b, c);
            for (std::size_t i = 0; i < sa.size(); ++i) {
                double d = std::arg(sa[i]) - std::arg(sb[i]);
                while (d <= -M_PI) d += 2 * M_PI;
                while (d > M_PI) d -= 2 * M_PI;
                expect += std::abs(d);
            }
        }
        expect /= 3.0 * 64.0;
        CHECK(std::abs(structural_loss(a, b).value - expect) < 1e-9);
    }
    SUBCASE("gradient matches finite differences") {
        const Image input = testutil::random_image(8, 8, gen);
        Image enhanced = testutil::random_image(8, 8, gen);
        const LossValue lv = structural_loss(input, enhanced);
        check_gradient(enhanced, lv.grad,
                       [&] { return structural_loss(input, enhanced).value; }, 1e-4, 30);
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS_AS(structural_loss(Image(4, 4), Image(4, 5)), std::invalid_argument);
    }
}

TEST_CASE("color loss") {
    SUBCASE("gray image is zero") {
        auto gen = testutil::rng(51);
        Image gray(5, 5);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 5; ++x) {
                const double v = dist(gen);
                for (int c = 0; c < 3; ++c) gray.at(y, x, c) = v;
            }
        CHECK(color_loss(gray).value == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("pure red constant evaluates to 2") {
        Image red(3, 3);
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 3; ++x) red.at(y, x, 0) = 1.0;
        CHECK(color_loss(red).value == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("oracle and gradient") {
        auto gen = testutil::rng(52);
        Image img = testutil::random_image(6, 9, gen);
        double mu[3] = {};
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 9; ++x)
                for (int c = 0; c < 3; ++c) mu[c] += img.at(y, x, c) / 54.0;
        const double expect = (mu[0] - mu[1]) * (mu[0] - mu[1]) +
                              (mu[1] - mu[2]) * (mu[1] - mu[2]) +
                              (mu[2] - mu[0]) * (mu[2] - mu[0]);
        const LossValue lv = color_loss(img);
        CHECK(std::abs(lv.value - expect) < 1e-12);
        check_gradient(img, lv.grad, [&] { return color_loss(img).value; }, 1e-6);
    }
    SUBCASE("invariant under pixel permutation") {
        auto gen = testutil::rng(53);
        Image img = testutil::random_image(4, 4, gen);
        Image perm = img;
        for (int c = 0; c < 3; ++c) std::swap(perm.at(0, 0, c), perm.at(3, 2, c));
        CHECK(color_loss(img).value == doctest::Approx(color_loss(perm).value).epsilon(1e-12));
    }
}

TEST_CASE("smoothing loss") {
    SUBCASE("constant maps are zero") {
        ParamStack stack;
        for (int s = 0; s < 8; ++s) stack.steps.emplace_back(4, 4, 0.37);
        CHECK(smoothing_loss(stack).value == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("1x2 single-channel step contributes 0.5") {
        ParamStack stack;
        Image m(1, 2);
        m.at(0, 1, 0) = 1.0; // dx = 1 at pixel 0, channel r only
        stack.steps.push_back(m);
        CHECK(smoothing_loss(stack).value == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("matches a difference-loop oracle and finite differences") {
        auto gen = testutil::rng(61);
        ParamStack stack;
        for (int s = 0; s < 8; ++s) stack.steps.push_back(testutil::random_param_map(4, 4, gen));
        double expect = 0.0;
        for (const Image& a : stack.steps)
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int y = 0; y < 4; ++y)
                    for (int x = 0; x < 4; ++x) {
                        const double dx = x < 3 ? a.at(y, x + 1, c) - a.at(y, x, c) : 0.0;
                        const double dy = y < 3 ? a.at(y + 1, x, c) - a.at(y, x, c) : 0.0;
                        const double t = std::abs(dx) + std::abs(dy);
                        acc += t * t;
                    }
                expect += acc / 16.0;
            }
        expect /= 8.0;
        const StackLossValue lv = smoothing_loss(stack);
        CHECK(std::abs(lv.value - expect) < 1e-12);
        check_gradient(stack.steps[3], lv.grad.steps[3],
                       [&] { return smoothing_loss(stack).value; }, 1e-5, 30);
    }
}

TEST_CASE("total loss") {
    SUBCASE("identity enhancement of target gray image is zero everywhere") {
        Image img(32, 32, 0.65);
        ParamStack stack;
        for (int s = 0; s < 8; ++s) stack.steps.emplace_back(32, 32, 0.0);
        const TotalLoss t = total_loss(img, img, stack, LossWeights{});
        CHECK(t.report.e == 0.0);
        CHECK(t.report.p == 0.0);
        CHECK(t.report.c == 0.0);
        CHECK(t.report.s == 0.0);
        CHECK(t.report.total == 0.0);
    }
    SUBCASE("weighted recomposition") {
        auto gen = testutil::rng(71);
        const Image input = testutil::random_image(16, 16, gen);
        const Image enhanced = testutil::random_image(16, 16, gen);
        ParamStack stack;
        for (int s = 0; s < 4; ++s) stack.steps.push_back(testutil::random_param_map(16, 16, gen));
        const LossWeights w{};
        const TotalLoss t = total_loss(input, enhanced, stack, w);
        const double manual = w.exposure * exposure_loss(enhanced).value +
                              structural_loss(input, enhanced).value +
                              w.color * color_loss(enhanced).value +
                              w.smoothing * smoothing_loss(stack).value;
        CHECK(std::abs(t.report.total - manual) < 1e-12);
        CHECK(std::abs(t.report.total - (w.exposure * t.report.e + t.report.p + w.color * t.report.c +
                                         w.smoothing * t.report.s)) < 1e-12);
    }
    SUBCASE("linear in the weights") {
        auto gen = testutil::rng(72);
        const Image input = testutil::random_image(16, 16, gen);
        const Image enhanced = testutil::random_image(16, 16, gen);
        ParamStack stack;
        stack.steps.push_back(testutil::random_param_map(16, 16, gen));
        LossWeights w1{}, w2{};
        w2.exposure = 2.0 * w1.exposure;
        const TotalLoss a = total_loss(input, enhanced, stack, w1);
        const TotalLoss b = total_loss(input, enhanced, stack, w2);
        CHECK(b.report.total - b.report.e * w2.exposure ==
              doctest::Approx(a.report.total - a.report.e * w1.exposure).epsilon(1e-12));
        CHECK(b.report.e == a.report.e);
    }
    SUBCASE("direct evaluation of the weighted sum") {
        // components (e,p,c,s) = (0.04, 0, 2, 0) with weights (10, 5, 1600)
        CHECK(10.0 * 0.04 + 5.0 * 2.0 == doctest::Approx(10.4));
    }
}

TEST_CASE("diff loss") {
    SUBCASE("zero cases and constants") {
        Image a(4, 4, 0.5);
        CHECK(diff_loss(a, a).value == 0.0);
        CHECK(diff_loss(Image(4, 4, 0.0), Image(4, 4, 0.5)).value ==
              doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("matches an element loop and finite differences") {
        auto gen = testutil::rng(81);
        const Image ref = testutil::random_image(7, 7, gen);
        Image out = testutil::random_image(7, 7, gen);
        double expect = 0.0;
        for (std::size_t i = 0; i < ref.data.size(); ++i)
            expect += std::abs(out.data[i] - ref.data[i]);
        expect /= static_cast<double>(ref.data.size());
        const LossValue lv = diff_loss(ref, out);
        CHECK(std::abs(lv.value - expect) < 1e-12);
        check_gradient(out, lv.grad, [&] { return diff_loss(ref, out).value; }, 1e-6, 30);
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS_AS(diff_loss(Image(2, 2), Image(2, 3)), std::invalid_argument);
    }
}

TEST_CASE("loss report serializes to JSON") {
    LossReport r;
    r.e = 0.25;
    r.total = 2.5;
    r.diff = 0.1;
    const std::string j = r.to_json();
    CHECK(j.find("\"e\":0.25") != std::string::npos);
    CHECK(j.find("\"diff\":0.1") != std::string::npos);
}
