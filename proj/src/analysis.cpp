#include "dipole/analysis.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "dipole/core.hpp"

namespace dipole {

namespace {

// Derivative along one axis of a line of `length` samples read through `at`.
template <typename At>
double derivative(At at, std::size_t k, std::size_t length) {
    if (length == 1) {
        return 0.0;
    }
    if (k == 0) {
        return at(1) - at(0);
    }
    if (k + 1 == length) {
        return at(k) - at(k - 1);
    }
    return (at(k + 1) - at(k - 1)) / 2.0;
}

void require_same_shape(const VectorField& a, const VectorField& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw DimensionError("field sizes differ: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                             " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
}

AngularStats gated_stats(const VectorField& a, const VectorField& b, double gate_a, double gate_b) {
    require_same_shape(a, b);
    std::vector<double> angles;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double ax = a.xs()[k];
        const double ay = a.ys()[k];
        const double bx = b.xs()[k];
        const double by = b.ys()[k];
        const double ma = std::hypot(ax, ay);
        const double mb = std::hypot(bx, by);
        if (ma > 0.0 && mb > 0.0 && ma >= gate_a && mb >= gate_b) {
            angles.push_back(angle_between_deg(ax, ay, bx, by));
        }
    }
    AngularStats stats;
    stats.sample_count = angles.size();
    if (angles.empty()) {
        return stats;
    }
    std::sort(angles.begin(), angles.end());
    const std::size_t mid = angles.size() / 2;
    stats.median_angle_deg = angles.size() % 2 == 1 ? angles[mid] : (angles[mid - 1] + angles[mid]) / 2.0;
    stats.mean_angle_deg = std::accumulate(angles.begin(), angles.end(), 0.0) / static_cast<double>(angles.size());
    return stats;
}

double max_magnitude(const VectorField& field) { return magnitude_field(field).max(); }

}  // namespace

VectorField gradient_field(const GrayImage& img) {
    if (img.width() < 3 && img.height() < 3) {
        throw DimensionError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " is too small for a gradient; one side must be at least 3 pixels");
    }
    VectorField out(img.width(), img.height());
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            const double gx = derivative([&](std::size_t k) { return static_cast<double>(img(r, k)); }, c, img.width());
            const double gy = derivative([&](std::size_t k) { return static_cast<double>(img(k, c)); }, r, img.height());
            out.set(r, c, gx, gy);
        }
    }
    return out;
}

VectorField perpendicular_field(const VectorField& field) {
    std::vector<double> xs(field.size());
    std::vector<double> ys(field.size());
    for (std::size_t k = 0; k < field.size(); ++k) {
        xs[k] = -field.ys()[k];
        ys[k] = field.xs()[k];
    }
    return VectorField(field.width(), field.height(), std::move(xs), std::move(ys));
}

double angle_between_deg(double ax, double ay, double bx, double by) {
    const double cosine = (ax * bx + ay * by) / (std::hypot(ax, ay) * std::hypot(bx, by));
    return std::acos(std::clamp(cosine, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

AngularStats angular_agreement(const VectorField& a, const VectorField& b, double min_magnitude) {
    if (!(min_magnitude >= 0.0)) {
        throw std::invalid_argument("angular_agreement: min_magnitude must be >= 0");
    }
    return gated_stats(a, b, min_magnitude, min_magnitude);
}

AngularStats angular_agreement_relative(const VectorField& a, const VectorField& b, double fraction) {
    if (!(fraction >= 0.0)) {
        throw std::invalid_argument("angular_agreement_relative: fraction must be >= 0");
    }
    require_same_shape(a, b);
    return gated_stats(a, b, fraction * max_magnitude(a), fraction * max_magnitude(b));
}

}  // namespace dipole
