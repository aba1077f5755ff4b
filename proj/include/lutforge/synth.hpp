#pragma once

#include <cstdint>

#include "lutforge/image.hpp"

namespace lutforge {

// Seeded smooth value-noise texture centered on `mean`, clamped to [0,1].
// Deterministic across platforms and thread counts.
Image synth_value_noise(int h, int w, std::uint64_t seed, double mean = 0.5,
                        double amplitude = 0.25, int cell = 8);

} // namespace lutforge
