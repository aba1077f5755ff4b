#pragma once

#include <complex>
#include <vector>

#include "lutforge/image.hpp"

namespace lutforge {

// Per-channel complex spectrum of an H x W image.
struct Spectrum {
    int h = 0, w = 0;
    std::vector<std::complex<double>> bins; // 3 * h * w, channel-major

    Spectrum() = default;
    Spectrum(int height, int width)
        : h(height), w(width), bins(static_cast<std::size_t>(3) * height * width) {}

    std::size_t idx(int c, int y, int x) const {
        return (static_cast<std::size_t>(c) * h + y) * static_cast<std::size_t>(w) + x;
    }
    std::complex<double> at(int c, int y, int x) const { return bins[idx(c, y, x)]; }
    std::complex<double>& at(int c, int y, int x) { return bins[idx(c, y, x)]; }
};

// 1D transform for any length: mixed-radix Cooley-Tukey with Bluestein for
// large prime factors. Unnormalized forward, 1/n on the inverse.
void fft_1d(std::vector<std::complex<double>>& a, bool inverse);

Spectrum dft2(const Image& img);
Image idft2_real(const Spectrum& spec); // real part of the inverse transform

// atan2(imag, real) per bin; zero bins get phase 0.
Image phase(const Spectrum& spec);

struct PhaseOnlyResult {
    Image image;
    bool constant_channel[3]; // channel had no non-DC content, set to mid-gray
};

// Unit-magnitude spectrum, inverse transform, per-channel min-max normalize.
PhaseOnlyResult phase_only_reconstruction(const Image& img);

} // namespace lutforge
