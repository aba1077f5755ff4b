#pragma once

#include <functional>
#include <string>
#include <vector>

namespace lutforge {

struct TimingStats {
    double min_ms = 0.0;
    double median_ms = 0.0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    std::vector<double> samples_ms;
};

// warmup discarded runs, then `repeat` timed runs on a monotonic clock.
TimingStats measure(const std::function<void()>& closure, int warmup = 3, int repeat = 100);

struct ScalingEntry {
    std::string label;
    std::size_t pixels = 0;
    double median_ms = 0.0;
};

struct ScalingReport {
    struct Ratio {
        std::string from, to;
        double pixel_ratio = 0.0;
        double time_ratio = 0.0;
        bool super_linear = false; // time ratio > 1.3 * pixel ratio
    };
    std::vector<Ratio> ratios;
};

ScalingReport scaling_check(const std::vector<ScalingEntry>& entries, double slack = 1.3);

} // namespace lutforge
