#pragma once

#include <vector>

#include "multilap/image.hpp"

namespace multilap {

enum class CurveFamily { identity, linear_gain, s_curve, inverse_s_curve, gamma_s_curve };

// Signed detail layers live in [-1, 1]; the base layer lives in [0, 1].
enum class CurveDomain { signed_detail, base };

struct CurveSpec {
    CurveFamily family = CurveFamily::identity;
    CurveDomain domain = CurveDomain::signed_detail;
    double a = 1.0;       // sigmoid strength, > 0
    double width = 1.0;   // active range, in (0, 1]; identity outside
    double gamma = 0.75;  // gamma_s_curve exponent, > 0
    double beta = 1.0;    // linear_gain factor, >= 0

    void validate() const;
    bool operator==(const CurveSpec&) const = default;
};

// Monotone scalar map realized as a lookup table. Inside [active_min,
// active_max] evaluation interpolates the LUT linearly; outside, the curve is
// the identity by construction, so evaluation returns the argument exactly
// (this also covers filter overshoot beyond the nominal domain). Domain
// endpoints evaluate without interpolation error.
struct ToneCurve {
    static constexpr int kLutSize = 4096;

    double dom_min = -1.0;
    double dom_max = 1.0;
    double active_min = -1.0;
    double active_max = 1.0;
    bool is_identity = false;
    std::vector<double> lut;  // kLutSize monotone non-decreasing samples over the domain

    double eval(double t) const;
};

ToneCurve make_curve(const CurveSpec& spec);

ImagePlane apply_curve(const ToneCurve& c, const ImagePlane& p, int threads = 1);

}  // namespace multilap
