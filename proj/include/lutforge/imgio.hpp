#pragma once

#include <string>

#include "lutforge/image.hpp"

namespace lutforge {

// PNG (8-bit RGB/RGBA, alpha dropped) or binary PPM (P6); values mapped
// v/255 into [0,1].
Image load_image(const std::string& path);

// Format by extension (.png / .ppm). Quantizes round-half-away-from-zero.
void save_image(const Image& img, const std::string& path);

} // namespace lutforge
