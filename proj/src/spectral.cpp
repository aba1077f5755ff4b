#include "lutforge/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "lutforge/parallel.hpp"

namespace lutforge {

namespace {

using cd = std::complex<double>;

// e^{-2*pi*i*t/n} for t in [0,n); cached per size.
const std::vector<cd>& twiddles(int n) {
    thread_local std::map<int, std::vector<cd>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cd> tw(n);
    for (int t = 0; t < n; ++t) {
        const double ang = -2.0 * M_PI * t / n;
        tw[t] = cd(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(tw)).first->second;
}

int smallest_prime_factor(int n) {
    if (n % 2 == 0) return 2;
    for (int p = 3; static_cast<long long>(p) * p <= n; p += 2)
        if (n % p == 0) return p;
    return n;
}

void fft_forward(std::vector<cd>& a);

// Arbitrary-length transform via chirp-z over a power-of-two convolution.
void bluestein(std::vector<cd>& a) {
    const int n = static_cast<int>(a.size());
    int m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<cd> chirp(n);
    for (int k = 0; k < n; ++k) {
        const std::int64_t e = (static_cast<std::int64_t>(k) * k) % (2 * n);
        const double ang = -M_PI * static_cast<double>(e) / n;
        chirp[k] = cd(std::cos(ang), std::sin(ang));
    }
    std::vector<cd> fa(m), fb(m);
    for (int k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
    fb[0] = std::conj(chirp[0]);
    for (int k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);
    fft_forward(fa);
    fft_forward(fb);
    for (int k = 0; k < m; ++k) fa[k] *= fb[k];
    // inverse pow2 transform via conjugation
    for (auto& v : fa) v = std::conj(v);
    fft_forward(fa);
    const double inv = 1.0 / m;
    for (int k = 0; k < n; ++k) a[k] = std::conj(fa[k]) * inv * chirp[k];
}

// Mixed-radix Cooley-Tukey; prime lengths beyond the small-radix set go to
// Bluestein.
void fft_forward(std::vector<cd>& a) {
    const int n = static_cast<int>(a.size());
    if (n <= 1) return;
    const int p = smallest_prime_factor(n);
    if (p == n && n > 43) {
        bluestein(a);
        return;
    }
    const int m = n / p;
    std::vector<std::vector<cd>> sub(p, std::vector<cd>(m));
    for (int u = 0; u < m; ++u)
        for (int r = 0; r < p; ++r) sub[r][u] = a[static_cast<std::size_t>(u) * p + r];
    for (auto& s : sub) fft_forward(s);
    const auto& tw = twiddles(n);
    for (int k = 0; k < n; ++k) {
        cd acc(0.0, 0.0);
        const int km = k % m;
        for (int r = 0; r < p; ++r)
            acc += tw[static_cast<std::size_t>(k) * r % n] * sub[r][km];
        a[k] = acc;
    }
}

} // namespace

void fft_1d(std::vector<cd>& a, bool inverse) {
    if (!inverse) {
        fft_forward(a);
        return;
    }
    for (auto& v : a) v = std::conj(v);
    fft_forward(a);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v = std::conj(v) * inv;
}

namespace {

// rows then columns, per channel
void transform2d(Spectrum& s, bool inverse) {
    parallel_rows(3 * s.h, [&](int row) {
        const int c = row / s.h, y = row % s.h;
        std::vector<cd> line(s.w);
        for (int x = 0; x < s.w; ++x) line[x] = s.at(c, y, x);
        fft_1d(line, inverse);
        for (int x = 0; x < s.w; ++x) s.at(c, y, x) = line[x];
    });
    parallel_rows(3 * s.w, [&](int col) {
        const int c = col / s.w, x = col % s.w;
        std::vector<cd> line(s.h);
        for (int y = 0; y < s.h; ++y) line[y] = s.at(c, y, x);
        fft_1d(line, inverse);
        for (int y = 0; y < s.h; ++y) s.at(c, y, x) = line[y];
    });
}

} // namespace

Spectrum dft2(const Image& img) {
    if (img.h < 1 || img.w < 1) throw std::invalid_argument("dft2: empty image");
    Spectrum s(img.h, img.w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.h; ++y)
            for (int x = 0; x < img.w; ++x) s.at(c, y, x) = cd(img.at(y, x, c), 0.0);
    transform2d(s, false);
    return s;
}

Image idft2_real(const Spectrum& spec) {
    Spectrum s = spec;
    transform2d(s, true);
    Image out(spec.h, spec.w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < spec.h; ++y)
            for (int x = 0; x < spec.w; ++x) out.at(y, x, c) = s.at(c, y, x).real();
    return out;
}

Image phase(const Spectrum& spec) {
    Image out(spec.h, spec.w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < spec.h; ++y)
            for (int x = 0; x < spec.w; ++x) {
                const cd v = spec.at(c, y, x);
                out.at(y, x, c) = (v.real() == 0.0 && v.imag() == 0.0)
                                      ? 0.0
                                      : std::atan2(v.imag(), v.real());
            }
    return out;
}

PhaseOnlyResult phase_only_reconstruction(const Image& img) {
    Spectrum s = dft2(img);
    PhaseOnlyResult res;
    res.image = Image(img.h, img.w);
    for (int c = 0; c < 3; ++c) {
        bool has_ac = false;
        for (int y = 0; y < s.h && !has_ac; ++y)
            for (int x = 0; x < s.w; ++x) {
                if (y == 0 && x == 0) continue;
                if (std::abs(s.at(c, y, x)) > 1e-12 * img.pixel_count()) {
                    has_ac = true;
                    break;
                }
            }
        res.constant_channel[c] = !has_ac;
    }
    for (auto& v : s.bins) {
        const double mag = std::abs(v);
        v = mag == 0.0 ? cd(1.0, 0.0) : v / mag;
    }
    Image recon = idft2_real(s);
    for (int c = 0; c < 3; ++c) {
        if (res.constant_channel[c]) {
            for (int y = 0; y < img.h; ++y)
                for (int x = 0; x < img.w; ++x) res.image.at(y, x, c) = 0.5;
            continue;
        }
        double lo = recon.at(0, 0, c), hi = lo;
        for (int y = 0; y < img.h; ++y)
            for (int x = 0; x < img.w; ++x) {
                lo = std::min(lo, recon.at(y, x, c));
                hi = std::max(hi, recon.at(y, x, c));
            }
        const double span = hi - lo;
        for (int y = 0; y < img.h; ++y)
            for (int x = 0; x < img.w; ++x)
                res.image.at(y, x, c) = span == 0.0 ? 0.5 : (recon.at(y, x, c) - lo) / span;
    }
    return res;
}

} // namespace lutforge
