#pragma once

#include <cstddef>
#include <vector>

namespace lutforge {

// H x W x 3 field of doubles, interleaved RGB, row-major. Used for images in
// [0,1], curve-parameter maps in [-1,1] and nonnegative weight maps; range
// invariants are enforced by the operations that produce each kind.
struct Image {
    int h = 0, w = 0;
    std::vector<double> data; // h * w * 3

    Image() = default;
    Image(int height, int width, double fill = 0.0)
        : h(height), w(width), data(static_cast<std::size_t>(height) * width * 3, fill) {}

    std::size_t idx(int y, int x, int c) const {
        return (static_cast<std::size_t>(y) * w + x) * 3 + c;
    }
    double at(int y, int x, int c) const { return data[idx(y, x, c)]; }
    double& at(int y, int x, int c) { return data[idx(y, x, c)]; }

    std::size_t pixel_count() const { return static_cast<std::size_t>(h) * w; }
    bool same_shape(const Image& o) const { return h == o.h && w == o.w; }
};

// n per-step curve-parameter maps, all sharing one shape.
struct ParamStack {
    std::vector<Image> steps;
};

double mean_intensity(const Image& img);

} // namespace lutforge
