#include "lutforge/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace lutforge {

OptimConfig OptimConfig::llut_defaults() { return OptimConfig{}; }

OptimConfig OptimConfig::nlut_defaults() {
    OptimConfig cfg;
    cfg.stage = OptimStage::Nlut;
    cfg.iterations = 300;
    cfg.learning_rate = 1e-5;
    cfg.lut_size = 17;
    return cfg;
}

void OptimConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("OptimConfig: iterations must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("OptimConfig: learning_rate must be > 0");
    if (lut_size < 2) throw std::invalid_argument("OptimConfig: lut_size must be >= 2");
    if (curve_steps < 1) throw std::invalid_argument("OptimConfig: curve_steps must be >= 1");
}

namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw std::runtime_error(std::string("optimizer: non-finite ") + what);
}

// First-moment / second-moment state shared by both stages.
struct AdamState {
    std::vector<double> m, v;
    int t = 0;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void apply_step(std::vector<double>& params, const std::vector<double>& grads,
                AdamState& state, const OptimConfig& cfg) {
    if (cfg.kind == OptimKind::Sgd) {
        for (std::size_t i = 0; i < params.size(); ++i)
            params[i] -= cfg.learning_rate * grads[i];
        return;
    }
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, state.t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, state.t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    }
}

} // namespace

PipelineGradient backprop_pipeline(const Image& img, const Lut3D& llut, int n,
                                   CurveMode mode, const LossWeights& weights,
                                   bool detach_params) {
    // Forward, keeping every intermediate image.
    std::vector<Image> inter;
    inter.reserve(n + 1);
    inter.push_back(img);
    ParamStack stack;
    stack.steps.reserve(n);
    if (mode == CurveMode::FixedParams) {
        const Image a0 = derive_params(llut, img);
        for (int s = 0; s < n; ++s) {
            inter.push_back(curve_step(inter.back(), a0));
            stack.steps.push_back(a0);
        }
    } else {
        for (int s = 0; s < n; ++s) {
            Image a = derive_params(llut, inter.back());
            inter.push_back(curve_step(inter.back(), a));
            stack.steps.push_back(std::move(a));
        }
    }

    TotalLoss loss = total_loss(img, inter.back(), stack, weights);
    check_finite(loss.report.e, "exposure loss");
    check_finite(loss.report.p, "structural loss");
    check_finite(loss.report.c, "color loss");
    check_finite(loss.report.s, "smoothing loss");

    PipelineGradient out;
    out.report = loss.report;
    out.entry_grads.assign(llut.entries().size(), 0.0);

    const int h = img.h, w = img.w;
    Image g = std::move(loss.grad_enhanced); // dL/dI_s, walked backwards

    // Reverse sweep. Lookup geometry is recomputed per pixel rather than
    // stored; accumulation order is fixed (steps, then rows) for determinism.
    if (mode == CurveMode::PerStepLookup) {
        for (int s = n - 1; s >= 0; --s) {
            const Image& is = inter[s];
            const Image& as = stack.steps[s];
            const Image& sg = loss.grad_params.steps[s];
            Image gprev(h, w);
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    double agrad[3];
                    for (int c = 0; c < 3; ++c) {
                        const double v = is.at(y, x, c);
                        agrad[c] = g.at(y, x, c) * v * (1.0 - v) + sg.at(y, x, c);
                    }
                    const Color col{is.at(y, x, 0), is.at(y, x, 1), is.at(y, x, 2)};
                    const LookupGradient lg = llut.lookup_gradient(col);
                    for (int q = 0; q < 8; ++q) {
                        const auto& cr = lg.corners[q];
                        if (lg.weights[q] == 0.0) continue;
                        for (int c = 0; c < 3; ++c)
                            out.entry_grads[llut.index(c, cr[0], cr[1], cr[2])] +=
                                lg.weights[q] * agrad[c];
                    }
                    for (int c = 0; c < 3; ++c) {
                        const double v = is.at(y, x, c);
                        double gv = g.at(y, x, c) * (1.0 + as.at(y, x, c) * (1.0 - 2.0 * v));
                        if (!detach_params)
                            for (int r = 0; r < 3; ++r) gv += lg.jacobian[r][c] * agrad[r];
                        gprev.at(y, x, c) = gv;
                    }
                }
            }
            g = std::move(gprev);
        }
    } else {
        // One shared map: accumulate dL/dA_0 across all steps, then splat
        // once through the input-image lookup geometry.
        Image a0_grad(h, w);
        const Image& a0 = stack.steps[0];
        for (int s = n - 1; s >= 0; --s) {
            const Image& is = inter[s];
            const Image& sg = loss.grad_params.steps[s];
            for (std::size_t i = 0; i < g.data.size(); ++i) {
                const double v = is.data[i];
                a0_grad.data[i] += g.data[i] * v * (1.0 - v) + sg.data[i];
                g.data[i] *= 1.0 + a0.data[i] * (1.0 - 2.0 * v);
            }
        }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const Color col{img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2)};
                const LookupGradient lg = llut.lookup_gradient(col);
                for (int q = 0; q < 8; ++q) {
                    if (lg.weights[q] == 0.0) continue;
                    const auto& cr = lg.corners[q];
                    for (int c = 0; c < 3; ++c)
                        out.entry_grads[llut.index(c, cr[0], cr[1], cr[2])] +=
                            lg.weights[q] * a0_grad.at(y, x, c);
                }
            }
    }

    for (double v : out.entry_grads) check_finite(v, "entry gradient");
    return out;
}

LlutFit fit_llut(const Image& img, const OptimConfig& cfg) {
    cfg.validate();
    if (cfg.stage != OptimStage::Llut) throw std::invalid_argument("fit_llut: cfg.stage must be llut");
    LlutFit fit{Lut3D(cfg.lut_size, ValueRange::Signed), {}};
    fit.trace.reserve(cfg.iterations);
    AdamState state(fit.lut.entries().size());
    for (int it = 0; it < cfg.iterations; ++it) {
        PipelineGradient pg = backprop_pipeline(img, fit.lut, cfg.curve_steps, cfg.curve_mode,
                                                cfg.weights, cfg.detach_params);
        fit.trace.push_back(pg.report);
        apply_step(fit.lut.entries(), pg.entry_grads, state, cfg);
        fit.lut.clamp_entries();
    }
    return fit;
}

NlutFit fit_nlut(const Image& coarse, const Image& pseudo_ref, const OptimConfig& cfg) {
    cfg.validate();
    if (cfg.stage != OptimStage::Nlut) throw std::invalid_argument("fit_nlut: cfg.stage must be nlut");
    if (!coarse.same_shape(pseudo_ref))
        throw std::invalid_argument("fit_nlut: coarse/pseudo-reference dimension mismatch");

    NlutFit fit{Lut3D::identity(cfg.lut_size, ValueRange::Unit),
                weight_map_uniform(coarse.h, coarse.w, 1.0),
                {}};
    fit.trace.reserve(cfg.iterations);
    AdamState lut_state(fit.lut.entries().size());
    AdamState map_state(fit.wmap.data.size());

    const int h = coarse.h, w = coarse.w;
    std::vector<double> entry_grads(fit.lut.entries().size());
    std::vector<double> map_grads(fit.wmap.data.size());

    for (int it = 0; it < cfg.iterations; ++it) {
        SuppressResult fwd = suppress(fit.lut, coarse, fit.wmap);
        LossValue dl = diff_loss(pseudo_ref, fwd.pre_clamp);
        check_finite(dl.value, "diff loss");

        double reg = 0.0;
        ParamStack mg_stack;
        if (cfg.wmap_smooth_weight > 0.0) {
            ParamStack ms;
            ms.steps.push_back(fit.wmap);
            StackLossValue sv = smoothing_loss(ms);
            reg = sv.value;
            mg_stack = std::move(sv.grad);
        }

        LossReport rep;
        rep.diff = dl.value;
        rep.s = reg;
        rep.total = dl.value + cfg.wmap_smooth_weight * reg;
        fit.trace.push_back(rep);

        std::fill(entry_grads.begin(), entry_grads.end(), 0.0);
        std::fill(map_grads.begin(), map_grads.end(), 0.0);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const Color col{coarse.at(y, x, 0), coarse.at(y, x, 1), coarse.at(y, x, 2)};
                const LookupGradient lg = fit.lut.lookup_gradient(col);
                const Color looked = fit.lut.lookup(col);
                const double lv[3] = {looked.r, looked.g, looked.b};
                for (int c = 0; c < 3; ++c) {
                    const double dpre = dl.grad.at(y, x, c);
                    if (dpre == 0.0) continue;
                    const double mval = fit.wmap.at(y, x, c);
                    map_grads[fit.wmap.idx(y, x, c)] += lv[c] * dpre;
                    for (int q = 0; q < 8; ++q) {
                        if (lg.weights[q] == 0.0) continue;
                        const auto& cr = lg.corners[q];
                        entry_grads[fit.lut.index(c, cr[0], cr[1], cr[2])] +=
                            lg.weights[q] * mval * dpre;
                    }
                }
            }
        if (cfg.wmap_smooth_weight > 0.0)
            for (std::size_t i = 0; i < map_grads.size(); ++i)
                map_grads[i] += cfg.wmap_smooth_weight * mg_stack.steps[0].data[i];

        for (double v : entry_grads) check_finite(v, "entry gradient");
        for (double v : map_grads) check_finite(v, "weight-map gradient");

        apply_step(fit.lut.entries(), entry_grads, lut_state, cfg);
        fit.lut.clamp_entries();
        apply_step(fit.wmap.data, map_grads, map_state, cfg);
        for (double& v : fit.wmap.data)
            if (v < 0.0) v = 0.0;
    }
    return fit;
}

} // namespace lutforge
