#pragma once

#include <optional>
#include <string>

#include "lutforge/image.hpp"

namespace lutforge {

struct LossWeights {
    double exposure = 10.0;  // lambda_1
    double color = 5.0;      // lambda_2
    double smoothing = 1600.0; // lambda_3
};

struct LossReport {
    double e = 0.0, p = 0.0, c = 0.0, s = 0.0;
    double total = 0.0;
    std::optional<double> diff;

    std::string to_json() const;
};

struct LossValue {
    double value = 0.0;
    Image grad; // d value / d image, same shape as the argument
};

// Mean over non-overlapping region x region blocks of (block gray mean - v)^2.
// Edge blocks may be partial; each still contributes one term.
LossValue exposure_loss(const Image& enhanced, double v = 0.65, int region = 16);

// Mean absolute per-bin Fourier phase difference, wrapped to (-pi, pi].
// Gradient is with respect to `enhanced`.
LossValue structural_loss(const Image& input, const Image& enhanced);

// Gray-world: sum over channel pairs of squared channel-mean differences.
LossValue color_loss(const Image& enhanced);

struct StackLossValue {
    double value = 0.0;
    ParamStack grad;
};

// Per map and channel, spatial mean of (|dx| + |dy|)^2 with forward
// differences (zero at the last row/column); channels summed, maps averaged.
StackLossValue smoothing_loss(const ParamStack& params);

struct TotalLoss {
    LossReport report;
    Image grad_enhanced;
    ParamStack grad_params;
};

TotalLoss total_loss(const Image& input, const Image& enhanced,
                     const ParamStack& params, const LossWeights& weights);

// Mean absolute error against a pseudo-reference; gradient wrt `output`.
LossValue diff_loss(const Image& pseudo_ref, const Image& output);

} // namespace lutforge
