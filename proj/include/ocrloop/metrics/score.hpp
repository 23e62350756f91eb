#pragma once

#include <string>

#include "json.hpp"

namespace ocrloop {

// A normalized score in [0,1] plus the metric that produced it and
// whatever per-metric detail is worth keeping in run reports.
struct MetricScore {
    double value = 0.0;
    std::string metric;
    nlohmann::json diagnostics = nlohmann::json::object();
};

inline double clamp01(double v) {
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

}  // namespace ocrloop
