#include "lutforge/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lutforge {

double psnr(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("psnr: dimension mismatch");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.data.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::vector<double> gaussian_kernel2d() {
    std::vector<double> k(kWindow * kWindow);
    const int half = kWindow / 2;
    double sum = 0.0;
    for (int y = 0; y < kWindow; ++y)
        for (int x = 0; x < kWindow; ++x) {
            const double dy = y - half, dx = x - half;
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
            k[y * kWindow + x] = v;
            sum += v;
        }
    for (double& v : k) v /= sum;
    return k;
}

} // namespace

double ssim(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("ssim: dimension mismatch");
    if (a.h < kWindow || a.w < kWindow)
        throw std::invalid_argument("ssim: image smaller than the 11x11 window");

    static const std::vector<double> kernel = gaussian_kernel2d();
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        long count = 0;
        for (int y0 = 0; y0 + kWindow <= a.h; ++y0) {
            for (int x0 = 0; x0 + kWindow <= a.w; ++x0) {
                double mu_a = 0.0, mu_b = 0.0;
                for (int y = 0; y < kWindow; ++y)
                    for (int x = 0; x < kWindow; ++x) {
                        const double w = kernel[y * kWindow + x];
                        mu_a += w * a.at(y0 + y, x0 + x, c);
                        mu_b += w * b.at(y0 + y, x0 + x, c);
                    }
                double var_a = 0.0, var_b = 0.0, cov = 0.0;
                for (int y = 0; y < kWindow; ++y)
                    for (int x = 0; x < kWindow; ++x) {
                        const double w = kernel[y * kWindow + x];
                        const double da = a.at(y0 + y, x0 + x, c) - mu_a;
                        const double db = b.at(y0 + y, x0 + x, c) - mu_b;
                        var_a += w * da * da;
                        var_b += w * db * db;
                        cov += w * da * db;
                    }
                const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
                const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
                acc += num / den;
                ++count;
            }
        }
        total += acc / count;
    }
    return total / 3.0;
}

} // namespace lutforge
