#include "lutforge/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "lutforge/parallel.hpp"

namespace lutforge {

WeightMap weight_map_uniform(int h, int w, double value) {
    if (value < 0.0) throw std::invalid_argument("weight_map_uniform: value must be >= 0");
    if (h < 1 || w < 1) throw std::invalid_argument("weight_map_uniform: empty dimensions");
    return WeightMap(h, w, value);
}

namespace {
void write_u32_le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<char*>(b), 4);
}
std::uint32_t read_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
} // namespace

void save_wmap(const WeightMap& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os.write("WMAP", 4);
    write_u32_le(os, static_cast<std::uint32_t>(m.h));
    write_u32_le(os, static_cast<std::uint32_t>(m.w));
    for (double v : m.data) {
        float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        write_u32_le(os, bits);
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

WeightMap load_wmap(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "WMAP", 4) != 0)
        throw std::runtime_error(path + ": bad magic at offset 0, expected WMAP");
    const std::uint32_t h = read_u32_le(is), w = read_u32_le(is);
    if (!is || h == 0 || w == 0) throw std::runtime_error(path + ": malformed header");
    WeightMap m(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        const std::uint32_t bits = read_u32_le(is);
        if (!is) throw std::runtime_error(path + ": truncated at value " + std::to_string(i));
        float f;
        std::memcpy(&f, &bits, 4);
        if (!(f >= 0.0f) || !std::isfinite(f))
            throw std::runtime_error(path + ": negative or non-finite weight at " + std::to_string(i));
        m.data[i] = f;
    }
    return m;
}

SuppressResult suppress(const Lut3D& nlut, const Image& coarse, const WeightMap& m) {
    if (nlut.value_range() != ValueRange::Unit)
        throw std::invalid_argument("suppress: NLUT must carry the [0,1] range tag");
    if (!coarse.same_shape(m))
        throw std::invalid_argument("suppress: weight map dimensions do not match image");
    SuppressResult res{Image(coarse.h, coarse.w), Image(coarse.h, coarse.w)};
    parallel_rows(coarse.h, [&](int y) {
        for (int x = 0; x < coarse.w; ++x) {
            const Color c{coarse.at(y, x, 0), coarse.at(y, x, 1), coarse.at(y, x, 2)};
            const Color o = nlut.lookup(c);
            const double v[3] = {o.r, o.g, o.b};
            for (int ch = 0; ch < 3; ++ch) {
                const double pre = v[ch] * m.at(y, x, ch);
                res.pre_clamp.at(y, x, ch) = pre;
                res.image.at(y, x, ch) = std::clamp(pre, 0.0, 1.0);
            }
        }
    });
    return res;
}

Image suppress_image(const Lut3D& nlut, const Image& coarse, const WeightMap& m) {
    if (nlut.value_range() != ValueRange::Unit)
        throw std::invalid_argument("suppress: NLUT must carry the [0,1] range tag");
    if (!coarse.same_shape(m))
        throw std::invalid_argument("suppress: weight map dimensions do not match image");
    Image out(coarse.h, coarse.w);
    parallel_rows(coarse.h, [&](int y) {
        const std::size_t base = static_cast<std::size_t>(y) * coarse.w * 3;
        for (int x = 0; x < coarse.w; ++x) {
            const std::size_t i = base + static_cast<std::size_t>(x) * 3;
            const Color o = nlut.lookup({coarse.data[i], coarse.data[i + 1], coarse.data[i + 2]});
            const double v[3] = {o.r, o.g, o.b};
            for (int ch = 0; ch < 3; ++ch) {
                const double pre = v[ch] * m.data[i + ch];
                out.data[i + ch] = pre < 0.0 ? 0.0 : (pre > 1.0 ? 1.0 : pre);
            }
        }
    });
    return out;
}

NoiseSchedule::NoiseSchedule(std::vector<double> betas_in) : betas(std::move(betas_in)) {
    if (betas.empty()) throw std::invalid_argument("NoiseSchedule: empty beta list");
    alpha_bar.resize(betas.size());
    double prod = 1.0;
    for (std::size_t t = 0; t < betas.size(); ++t) {
        if (!(betas[t] > 0.0 && betas[t] < 1.0))
            throw std::invalid_argument("NoiseSchedule: beta out of (0,1) at t=" + std::to_string(t));
        prod *= 1.0 - betas[t];
        alpha_bar[t] = prod;
    }
    for (std::size_t t = 1; t < alpha_bar.size(); ++t)
        if (!(alpha_bar[t] < alpha_bar[t - 1]))
            throw std::invalid_argument("NoiseSchedule: alpha_bar not strictly decreasing");
    if (!(alpha_bar.back() > 0.0))
        throw std::invalid_argument("NoiseSchedule: alpha_bar underflowed to zero");
}

NoiseSchedule NoiseSchedule::linear(int steps, double beta_lo, double beta_hi) {
    if (steps < 1) throw std::invalid_argument("NoiseSchedule: steps must be >= 1");
    std::vector<double> b(steps);
    for (int t = 0; t < steps; ++t)
        b[t] = steps == 1 ? beta_lo : beta_lo + (beta_hi - beta_lo) * t / (steps - 1);
    return NoiseSchedule(std::move(b));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Standard normal from a counter-based stream: two uniforms via splitmix64
// of (seed, counter), Box-Muller. Independent of thread scheduling.
double counter_normal(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t a = splitmix64(seed ^ splitmix64(counter * 2));
    const std::uint64_t b = splitmix64(seed ^ splitmix64(counter * 2 + 1));
    const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1p-53; // (0,1)
    const double u2 = static_cast<double>(b >> 11) * 0x1p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace

Image forward_noise(const Image& img, int t, const NoiseSchedule& schedule, std::uint64_t seed) {
    if (t < 0 || t >= schedule.total_steps())
        throw std::invalid_argument("forward_noise: t out of range [0, T)");
    const double abar = schedule.alpha_bar[t];
    const double sig = std::sqrt(1.0 - abar);
    const double mu = std::sqrt(abar);
    Image out(img.h, img.w);
    parallel_rows(img.h, [&](int y) {
        const std::size_t base = static_cast<std::size_t>(y) * img.w * 3;
        for (std::size_t i = base; i < base + static_cast<std::size_t>(img.w) * 3; ++i) {
            const double eps = counter_normal(seed, i);
            out.data[i] = std::clamp(mu * img.data[i] + sig * eps, 0.0, 1.0);
        }
    });
    return out;
}

} // namespace lutforge
