#pragma once

#include "lutforge/image.hpp"

namespace lutforge {

// 10*log10(1/MSE) on the [0,1] scale; +infinity for identical images.
double psnr(const Image& a, const Image& b);

// Wang et al. SSIM: 11x11 Gaussian window sigma 1.5, K1=0.01, K2=0.03,
// valid windows only, averaged over channels.
double ssim(const Image& a, const Image& b);

} // namespace lutforge
