#pragma once

#include <algorithm>

#include "ocrloop/metrics/score.hpp"

namespace ocrloop {

// Axis-aligned box in image pixel coordinates.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool well_formed() const { return x_min <= x_max && y_min <= y_max; }
    double area() const {
        return std::max(0.0, x_max - x_min) * std::max(0.0, y_max - y_min);
    }
};

inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

// Intersection over union. A zero-area union scores 0.
inline MetricScore iou(const BoundingBox& a, const BoundingBox& b) {
    MetricScore score;
    score.metric = "iou";
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    score.value = uni <= 0.0 ? 0.0 : clamp01(inter / uni);
    score.diagnostics["intersection"] = inter;
    score.diagnostics["union"] = uni;
    return score;
}

inline double iou_value(const BoundingBox& a, const BoundingBox& b) {
    return iou(a, b).value;
}

}  // namespace ocrloop
