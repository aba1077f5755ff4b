#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lutforge/image.hpp"
#include "lutforge/lut3d.hpp"

namespace lutforge {

using WeightMap = Image; // H x W x 3 nonnegative multipliers

WeightMap weight_map_uniform(int h, int w, double value);

void save_wmap(const WeightMap& m, const std::string& path);
WeightMap load_wmap(const std::string& path);

struct SuppressResult {
    Image image;     // clamped to [0,1]
    Image pre_clamp; // lookup * m before clamping, for the optimizer
};

// NLUT stage: per pixel, lookup(nlut, coarse(x)) * m(x).
SuppressResult suppress(const Lut3D& nlut, const Image& coarse, const WeightMap& m);

// Same clamped output, without materializing the pre-clamp image the
// optimizer wants. Used on the apply/bench path.
Image suppress_image(const Lut3D& nlut, const Image& coarse, const WeightMap& m);

// Variance-preserving forward-noising schedule: alpha_bar[t] = prod(1-beta).
struct NoiseSchedule {
    std::vector<double> betas;
    std::vector<double> alpha_bar;

    explicit NoiseSchedule(std::vector<double> betas_in);
    static NoiseSchedule linear(int steps = 1000, double beta_lo = 1e-4, double beta_hi = 0.02);
    int total_steps() const { return static_cast<int>(betas.size()); }
};

// I_t = sqrt(abar_t) * img + sqrt(1 - abar_t) * eps, eps ~ N(0,1) from a
// counter-based stream keyed on (seed, pixel, channel), clamped to [0,1].
Image forward_noise(const Image& img, int t, const NoiseSchedule& schedule, std::uint64_t seed);

} // namespace lutforge
