#include "lutforge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace lutforge {

TimingStats measure(const std::function<void()>& closure, int warmup, int repeat) {
    if (repeat < 1) throw std::invalid_argument("measure: repeat must be >= 1");
    using clock = std::chrono::steady_clock;
    for (int i = 0; i < warmup; ++i) closure();

    TimingStats stats;
    stats.samples_ms.reserve(repeat);
    for (int i = 0; i < repeat; ++i) {
        const auto t0 = clock::now();
        closure();
        const auto t1 = clock::now();
        stats.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    std::vector<double> sorted = stats.samples_ms;
    std::sort(sorted.begin(), sorted.end());
    stats.min_ms = sorted.front();
    stats.median_ms = sorted.size() % 2 == 1
                          ? sorted[sorted.size() / 2]
                          : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    double sum = 0.0;
    for (double v : sorted) sum += v;
    stats.mean_ms = sum / sorted.size();
    double sq = 0.0;
    for (double v : sorted) sq += (v - stats.mean_ms) * (v - stats.mean_ms);
    stats.stddev_ms = sorted.size() > 1 ? std::sqrt(sq / (sorted.size() - 1)) : 0.0;
    return stats;
}

ScalingReport scaling_check(const std::vector<ScalingEntry>& entries, double slack) {
    ScalingReport report;
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
        const auto& a = entries[i];
        const auto& b = entries[i + 1];
        ScalingReport::Ratio r;
        r.from = a.label;
        r.to = b.label;
        r.pixel_ratio = static_cast<double>(b.pixels) / static_cast<double>(a.pixels);
        r.time_ratio = b.median_ms / a.median_ms;
        r.super_linear = r.time_ratio > slack * r.pixel_ratio;
        report.ratios.push_back(r);
    }
    return report;
}

} // namespace lutforge
