#pragma once

#include "lutforge/image.hpp"
#include "lutforge/lut3d.hpp"

namespace lutforge {

enum class CurveMode { PerStepLookup, FixedParams };

// Per-pixel LUT query: out(x) = lookup(llut, img(x)). The table must carry
// the [-1,1] range tag.
Image derive_params(const Lut3D& llut, const Image& img);

// One quadratic brightening step: out = v + a*v*(1-v). Fixes 0 and 1 and is
// monotone in v for a in [-1,1], so [0,1] is preserved without clamping.
Image curve_step(const Image& img, const Image& params);

struct EnhanceResult {
    Image image;
    ParamStack params;
};

// n-step enhancement. PerStepLookup re-queries the table at every
// intermediate image; FixedParams derives one map from the input and reuses
// it (the stack then holds n copies).
EnhanceResult enhance(const Lut3D& llut, const Image& img, int n, CurveMode mode);

// Same result image as enhance(), but streams all n steps through registers
// per pixel without retaining the parameter maps. Use when only the output
// image is needed (CLI apply path, benchmarking); the optimizer needs the
// stack and goes through enhance().
Image enhance_image(const Lut3D& llut, const Image& img, int n, CurveMode mode);

} // namespace lutforge
