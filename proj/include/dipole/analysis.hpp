#pragma once

#include "dipole/types.hpp"

namespace dipole {

struct AngularStats {
    double median_angle_deg = 0.0;
    double mean_angle_deg = 0.0;
    std::size_t sample_count = 0;
};

/// Brightness gradient, +grad b (pointing toward brighter pixels, the same
/// sense as the dipole field; the electrostatic E = -grad V sign is not
/// applied). Central differences inside, one-sided differences on the
/// border, zero along an axis of length 1.
///
/// Throws DimensionError unless at least one side is 3 pixels or longer.
VectorField gradient_field(const GrayImage& img);

/// Quarter turn of every vector: (x, y) -> (-y, x).
VectorField perpendicular_field(const VectorField& field);

/// Unsigned angle in degrees, in [0, 180], between two non-zero vectors.
double angle_between_deg(double ax, double ay, double bx, double by);

/// Angle statistics over pixels where both vectors are non-zero and at
/// least `min_magnitude` long.
AngularStats angular_agreement(const VectorField& a, const VectorField& b, double min_magnitude);

/// As angular_agreement, but each field is gated at `fraction` of its own
/// maximum magnitude, which makes fields of different units comparable.
AngularStats angular_agreement_relative(const VectorField& a, const VectorField& b, double fraction);

}  // namespace dipole
