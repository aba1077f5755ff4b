#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lutforge/image.hpp"
#include "lutforge/lut3d.hpp"

namespace testutil {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline lutforge::Image random_image(int h, int w, std::mt19937_64& gen) {
    lutforge::Image img(h, w);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (double& v : img.data) v = dist(gen);
    return img;
}

inline lutforge::Image random_param_map(int h, int w, std::mt19937_64& gen) {
    lutforge::Image img(h, w);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : img.data) v = dist(gen);
    return img;
}

inline lutforge::Lut3D random_lut(int n, lutforge::ValueRange range, std::mt19937_64& gen) {
    lutforge::Lut3D lut(n, range);
    std::uniform_real_distribution<double> dist(lutforge::range_lo(range), 1.0);
    for (double& v : lut.entries()) v = dist(gen);
    return lut;
}

// Independent 8-corner weighted-sum oracle for trilinear interpolation.
// Deliberately written differently from the library path: explicit floor
// with the same lower-cell tie rule, expanded weight products.
inline void naive_trilinear(const lutforge::Lut3D& lut, double r, double g, double b,
                            double out[3]) {
    const int n = lut.size();
    auto locate = [&](double v) {
        double p = std::min(1.0, std::max(0.0, v)) * (n - 1);
        int lo = static_cast<int>(std::floor(p));
        if (p == std::floor(p) && lo > 0) lo -= 1;
        if (lo > n - 2) lo = n - 2;
        return std::pair<int, double>(lo, p - lo);
    };
    auto [i0, fr] = locate(r);
    auto [j0, fg] = locate(g);
    auto [k0, fb] = locate(b);
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        acc += (1 - fr) * (1 - fg) * (1 - fb) * lut.at(c, i0, j0, k0);
        acc += (1 - fr) * (1 - fg) * fb * lut.at(c, i0, j0, k0 + 1);
        acc += (1 - fr) * fg * (1 - fb) * lut.at(c, i0, j0 + 1, k0);
        acc += (1 - fr) * fg * fb * lut.at(c, i0, j0 + 1, k0 + 1);
        acc += fr * (1 - fg) * (1 - fb) * lut.at(c, i0 + 1, j0, k0);
        acc += fr * (1 - fg) * fb * lut.at(c, i0 + 1, j0, k0 + 1);
        acc += fr * fg * (1 - fb) * lut.at(c, i0 + 1, j0 + 1, k0);
        acc += fr * fg * fb * lut.at(c, i0 + 1, j0 + 1, k0 + 1);
        out[c] = acc;
    }
}

// O(N^4) textbook 2D DFT of one channel.
inline std::vector<std::complex<double>> naive_dft2_channel(const lutforge::Image& img, int ch) {
    const int h = img.h, w = img.w;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(h) * w);
    for (int ky = 0; ky < h; ++ky)
        for (int kx = 0; kx < w; ++kx) {
            std::complex<double> acc(0.0, 0.0);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const double ang =
                        -2.0 * M_PI * (static_cast<double>(ky) * y / h + static_cast<double>(kx) * x / w);
                    acc += img.at(y, x, ch) * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            out[static_cast<std::size_t>(ky) * w + kx] = acc;
        }
    return out;
}

// Central finite difference of a scalar functional at one coordinate.
template <typename F>
double central_diff(F&& f, double& slot, double h = 1e-5) {
    const double saved = slot;
    slot = saved + h;
    const double up = f();
    slot = saved - h;
    const double down = f();
    slot = saved;
    return (up - down) / (2.0 * h);
}

inline double rel_err(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) / scale;
}

} // namespace testutil
