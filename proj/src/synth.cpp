#include "lutforge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lutforge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform in [-1,1] keyed on (seed, lattice point, channel)
double lattice_noise(std::uint64_t seed, int gy, int gx, int c) {
    const std::uint64_t key =
        splitmix64(seed ^ (static_cast<std::uint64_t>(gy) << 40) ^
                   (static_cast<std::uint64_t>(gx) << 16) ^ static_cast<std::uint64_t>(c));
    return static_cast<double>(key >> 11) * 0x1p-52 - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

} // namespace

Image synth_value_noise(int h, int w, std::uint64_t seed, double mean, double amplitude, int cell) {
    if (h < 1 || w < 1) throw std::invalid_argument("synth_value_noise: empty dimensions");
    if (cell < 1) throw std::invalid_argument("synth_value_noise: cell must be >= 1");
    Image img(h, w);
    for (int y = 0; y < h; ++y) {
        const int gy = y / cell;
        const double ty = smoothstep(static_cast<double>(y % cell) / cell);
        for (int x = 0; x < w; ++x) {
            const int gx = x / cell;
            const double tx = smoothstep(static_cast<double>(x % cell) / cell);
            for (int c = 0; c < 3; ++c) {
                const double n00 = lattice_noise(seed, gy, gx, c);
                const double n01 = lattice_noise(seed, gy, gx + 1, c);
                const double n10 = lattice_noise(seed, gy + 1, gx, c);
                const double n11 = lattice_noise(seed, gy + 1, gx + 1, c);
                const double n = (1.0 - ty) * ((1.0 - tx) * n00 + tx * n01) +
                                 ty * ((1.0 - tx) * n10 + tx * n11);
                img.at(y, x, c) = std::clamp(mean + amplitude * n, 0.0, 1.0);
            }
        }
    }
    return img;
}

} // namespace lutforge
