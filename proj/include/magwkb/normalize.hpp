#pragma once

#include <Eigen/Dense>

#include "magwkb/surface_wkb.hpp"

namespace magwkb {

struct NormalizedField {
    FieldSpecSurface field;
    Eigen::Matrix2d rotation;  // old coordinates q = rotation * q_new
};

// Rotates Taylor data (in q1,q2) so the quadratic part of B becomes
// alpha q1^2 + gamma q2^2 with 0 < alpha <= gamma; eta is rotated with it.
NormalizedField normalize_quadratic(const TruncatedSeries2& b_taylor, const TruncatedSeries2& eta_taylor);

}  // namespace magwkb
