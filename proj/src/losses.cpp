#include "lutforge/losses.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lutforge/spectral.hpp"

namespace lutforge {

std::string LossReport::to_json() const {
    nlohmann::json j{{"e", e}, {"p", p}, {"c", c}, {"s", s}, {"total", total}};
    if (diff) j["diff"] = *diff;
    return j.dump();
}

LossValue exposure_loss(const Image& enhanced, double v, int region) {
    if (region < 1) throw std::invalid_argument("exposure_loss: region must be >= 1");
    const int h = enhanced.h, w = enhanced.w;
    const int by = (h + region - 1) / region;
    const int bx = (w + region - 1) / region;
    const double z = static_cast<double>(by) * bx;

    LossValue out;
    out.grad = Image(h, w);
    double loss = 0.0;
    for (int b = 0; b < by; ++b) {
        for (int a = 0; a < bx; ++a) {
            const int y0 = b * region, y1 = std::min(h, y0 + region);
            const int x0 = a * region, x1 = std::min(w, x0 + region);
            const double npix = static_cast<double>(y1 - y0) * (x1 - x0);
            double sum = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    sum += enhanced.at(y, x, 0) + enhanced.at(y, x, 1) + enhanced.at(y, x, 2);
            const double vi = sum / (3.0 * npix);
            // deviations at summation-roundoff scale count as exactly on target
            double dev = vi - v;
            if (std::abs(dev) <= 1e-12) dev = 0.0;
            loss += dev * dev;
            const double g = 2.0 * dev / (z * npix * 3.0);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    for (int c = 0; c < 3; ++c) out.grad.at(y, x, c) = g;
        }
    }
    out.value = loss / z;
    return out;
}

namespace {
double wrap_angle(double a) {
    // principal angle in (-pi, pi]
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}
} // namespace

LossValue structural_loss(const Image& input, const Image& enhanced) {
    if (!input.same_shape(enhanced))
        throw std::invalid_argument("structural_loss: dimension mismatch");
    const Spectrum si = dft2(input);
    const Spectrum se = dft2(enhanced);
    const std::size_t nbins = se.bins.size();
    const std::size_t per_chan = nbins / 3;
    const double inv_n = 1.0 / static_cast<double>(nbins);

    double loss = 0.0;
    // complex cotangent gradient dL/dRe + i*dL/dIm per bin of the enhanced
    // spectrum; pulled back through the DFT below.
    Spectrum cg(se.h, se.w);
    for (std::size_t c0 = 0; c0 < nbins; c0 += per_chan) {
        // bins at FFT-roundoff scale carry garbage phases (and a ~1/|F|
        // gradient); floor them at a relative threshold per channel
        double ea = 0.0, eb = 0.0;
        for (std::size_t k = c0; k < c0 + per_chan; ++k) {
            ea += std::norm(si.bins[k]);
            eb += std::norm(se.bins[k]);
        }
        const double thr_a = 1e-18 * ea, thr_b = 1e-18 * eb;
        for (std::size_t k = c0; k < c0 + per_chan; ++k) {
            const auto a = si.bins[k];
            const auto b = se.bins[k];
            const double ma = std::norm(a), mb = std::norm(b);
            const double pa = ma <= thr_a ? 0.0 : std::atan2(a.imag(), a.real());
            const double pb = mb <= thr_b ? 0.0 : std::atan2(b.imag(), b.real());
            const double d = wrap_angle(pa - pb);
            loss += std::abs(d);
            if (mb <= thr_b || d == 0.0) continue;
            const double dphi = -(d > 0.0 ? 1.0 : -1.0) * inv_n; // dL/d pb
            cg.bins[k] = std::complex<double>(dphi * -b.imag() / mb, dphi * b.real() / mb);
        }
    }

    // dL/dx = Re[ forward DFT of conj(cg) ], since dF_k/dx_p = e^{-i theta}.
    for (auto& v : cg.bins) v = std::conj(v);
    Spectrum back = cg;
    using cdv = std::vector<std::complex<double>>;
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < back.h; ++y) {
            cdv line(back.w);
            for (int x = 0; x < back.w; ++x) line[x] = back.at(c, y, x);
            fft_1d(line, false);
            for (int x = 0; x < back.w; ++x) back.at(c, y, x) = line[x];
        }
        for (int x = 0; x < back.w; ++x) {
            cdv line(back.h);
            for (int y = 0; y < back.h; ++y) line[y] = back.at(c, y, x);
            fft_1d(line, false);
            for (int y = 0; y < back.h; ++y) back.at(c, y, x) = line[y];
        }
    }

    LossValue out;
    out.value = loss * inv_n;
    out.grad = Image(input.h, input.w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < input.h; ++y)
            for (int x = 0; x < input.w; ++x) out.grad.at(y, x, c) = back.at(c, y, x).real();
    return out;
}

LossValue color_loss(const Image& enhanced) {
    const double npix = static_cast<double>(enhanced.pixel_count());
    double mu[3] = {0.0, 0.0, 0.0};
    for (int y = 0; y < enhanced.h; ++y)
        for (int x = 0; x < enhanced.w; ++x)
            for (int c = 0; c < 3; ++c) mu[c] += enhanced.at(y, x, c);
    for (double& m : mu) m /= npix;

    LossValue out;
    out.value = (mu[0] - mu[1]) * (mu[0] - mu[1]) + (mu[1] - mu[2]) * (mu[1] - mu[2]) +
                (mu[2] - mu[0]) * (mu[2] - mu[0]);
    out.grad = Image(enhanced.h, enhanced.w);
    const double d[3] = {2.0 * (2.0 * mu[0] - mu[1] - mu[2]) / npix,
                         2.0 * (2.0 * mu[1] - mu[2] - mu[0]) / npix,
                         2.0 * (2.0 * mu[2] - mu[0] - mu[1]) / npix};
    for (int y = 0; y < enhanced.h; ++y)
        for (int x = 0; x < enhanced.w; ++x)
            for (int c = 0; c < 3; ++c) out.grad.at(y, x, c) = d[c];
    return out;
}

StackLossValue smoothing_loss(const ParamStack& params) {
    const int n = static_cast<int>(params.steps.size());
    if (n < 1) throw std::invalid_argument("smoothing_loss: empty stack");
    StackLossValue out;
    out.grad.steps.reserve(n);
    double total = 0.0;
    for (const Image& a : params.steps) {
        Image g(a.h, a.w);
        const double inv_pix = 1.0 / static_cast<double>(a.pixel_count());
        for (int c = 0; c < 3; ++c) {
            for (int y = 0; y < a.h; ++y) {
                for (int x = 0; x < a.w; ++x) {
                    const double dx = x + 1 < a.w ? a.at(y, x + 1, c) - a.at(y, x, c) : 0.0;
                    const double dy = y + 1 < a.h ? a.at(y + 1, x, c) - a.at(y, x, c) : 0.0;
                    const double t = std::abs(dx) + std::abs(dy);
                    total += t * t * inv_pix;
                    if (t == 0.0) continue;
                    const double coef = 2.0 * t * inv_pix / n;
                    if (dx != 0.0) {
                        const double sx = dx > 0.0 ? 1.0 : -1.0;
                        g.at(y, x, c) -= coef * sx;
                        g.at(y, x + 1, c) += coef * sx;
                    }
                    if (dy != 0.0) {
                        const double sy = dy > 0.0 ? 1.0 : -1.0;
                        g.at(y, x, c) -= coef * sy;
                        g.at(y + 1, x, c) += coef * sy;
                    }
                }
            }
        }
        out.grad.steps.push_back(std::move(g));
    }
    out.value = total / n;
    return out;
}

TotalLoss total_loss(const Image& input, const Image& enhanced,
                     const ParamStack& params, const LossWeights& weights) {
    if (!input.same_shape(enhanced))
        throw std::invalid_argument("total_loss: input/enhanced dimension mismatch");
    LossValue e = exposure_loss(enhanced);
    LossValue p = structural_loss(input, enhanced);
    LossValue c = color_loss(enhanced);
    StackLossValue s = smoothing_loss(params);

    TotalLoss out;
    out.report.e = e.value;
    out.report.p = p.value;
    out.report.c = c.value;
    out.report.s = s.value;
    out.report.total = weights.exposure * e.value + p.value + weights.color * c.value +
                       weights.smoothing * s.value;

    out.grad_enhanced = Image(enhanced.h, enhanced.w);
    for (std::size_t i = 0; i < out.grad_enhanced.data.size(); ++i)
        out.grad_enhanced.data[i] = weights.exposure * e.grad.data[i] + p.grad.data[i] +
                                    weights.color * c.grad.data[i];
    out.grad_params.steps.reserve(s.grad.steps.size());
    for (Image& g : s.grad.steps) {
        for (double& v : g.data) v *= weights.smoothing;
        out.grad_params.steps.push_back(std::move(g));
    }
    return out;
}

LossValue diff_loss(const Image& pseudo_ref, const Image& output) {
    if (!pseudo_ref.same_shape(output))
        throw std::invalid_argument("diff_loss: dimension mismatch");
    const double inv_n = 1.0 / static_cast<double>(output.data.size());
    LossValue out;
    out.grad = Image(output.h, output.w);
    double loss = 0.0;
    for (std::size_t i = 0; i < output.data.size(); ++i) {
        const double d = output.data[i] - pseudo_ref.data[i];
        loss += std::abs(d);
        // differences at interpolation-roundoff scale count as ties
        out.grad.data[i] = std::abs(d) <= 1e-12 ? 0.0 : (d > 0.0 ? inv_n : -inv_n);
    }
    out.value = loss * inv_n;
    return out;
}

} // namespace lutforge
