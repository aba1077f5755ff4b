#pragma once

#include <cstdint>
#include <vector>

#include "lutforge/curve.hpp"
#include "lutforge/losses.hpp"
#include "lutforge/lut3d.hpp"
#include "lutforge/noise.hpp"

namespace lutforge {

enum class OptimStage { Llut, Nlut };
enum class OptimKind { Adam, Sgd };

struct OptimConfig {
    OptimStage stage = OptimStage::Llut;
    int iterations = 200;         // 300 for the nlut stage
    double learning_rate = 1e-4;  // 1e-5 for the nlut stage
    int lut_size = 9;             // 17 for the nlut stage
    int curve_steps = 8;
    CurveMode curve_mode = CurveMode::PerStepLookup;
    bool detach_params = false;   // drop the dA/dI lookup-Jacobian path
    LossWeights weights;
    double wmap_smooth_weight = 0.1;
    std::uint64_t seed = 0;
    OptimKind kind = OptimKind::Adam;
    double beta1 = 0.9;
    double beta2 = 0.99;
    double adam_eps = 1e-8;

    static OptimConfig llut_defaults();
    static OptimConfig nlut_defaults();
    void validate() const;
};

struct PipelineGradient {
    std::vector<double> entry_grads; // d total / d entry, 3*N^3
    LossReport report;
};

// Reverse-mode pass through enhance + total_loss into the LUT entries.
PipelineGradient backprop_pipeline(const Image& img, const Lut3D& llut, int n,
                                   CurveMode mode, const LossWeights& weights,
                                   bool detach_params = false);

struct LlutFit {
    Lut3D lut;
    std::vector<LossReport> trace;
};

// Stage 1: fit the curve-parameter table to one image under the
// zero-reference objective, starting from the all-zero identity.
LlutFit fit_llut(const Image& img, const OptimConfig& cfg);

struct NlutFit {
    Lut3D lut;
    WeightMap wmap;
    std::vector<LossReport> trace;
};

// Stage 2: jointly fit the color table and weight map against a
// pseudo-reference under L1 plus a weight-map smoothness term.
NlutFit fit_nlut(const Image& coarse, const Image& pseudo_ref, const OptimConfig& cfg);

} // namespace lutforge
