#include "multilap/tonemap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "multilap/parallel.hpp"

namespace multilap {

namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Odd sigmoid remap of the interval [-half, half] onto itself: zero at zero,
// +-half at +-half (the normalizer cancels bit-exactly at the boundary).
double sigmoid_segment(double u, double half, double a, double norm) {
    double unit = std::abs(u) / half;
    double val = half * ((2.0 * sigmoid(a * unit) - 1.0) / norm);
    return u < 0.0 ? -val : val;
}

double forward_sample(const CurveSpec& spec, double t) {
    const double a = spec.a;
    const double norm = 2.0 * sigmoid(a) - 1.0;
    if (spec.domain == CurveDomain::signed_detail) {
        const double w = spec.width;
        if (std::abs(t) > w) return t;
        return sigmoid_segment(t, w, a, norm);
    }
    const double half = spec.width / 2.0;
    const double u = t - 0.5;
    if (std::abs(u) > half) return t;
    return 0.5 + sigmoid_segment(u, half, a, norm);
}

}  // namespace

void CurveSpec::validate() const {
    switch (family) {
        case CurveFamily::identity:
            return;
        case CurveFamily::linear_gain:
            if (beta < 0.0) throw std::invalid_argument("linear gain must be >= 0");
            return;
        case CurveFamily::gamma_s_curve:
            if (domain != CurveDomain::base)
                throw std::invalid_argument("gamma_s_curve requires the base domain");
            if (gamma <= 0.0) throw std::invalid_argument("gamma must be > 0");
            [[fallthrough]];
        case CurveFamily::s_curve:
        case CurveFamily::inverse_s_curve:
            if (a <= 0.0) throw std::invalid_argument("curve strength a must be > 0");
            if (width <= 0.0 || width > 1.0)
                throw std::invalid_argument("curve width must be in (0, 1]");
            return;
    }
    throw std::invalid_argument("unknown curve family");
}

double ToneCurve::eval(double t) const {
    if (is_identity) return t;
    if (t == dom_min) return lut.front();
    if (t == dom_max) return lut.back();
    // The sigmoid families fix their active boundary (S(+-w) = +-w), so the
    // identity branch is taken at and beyond it; full-domain families
    // (linear_gain, gamma) have active == domain and interpolate throughout.
    if (t <= active_min || t >= active_max) return t;
    const double step = (dom_max - dom_min) / (kLutSize - 1);
    double u = (t - dom_min) / step;
    int idx = static_cast<int>(u);
    if (idx > kLutSize - 2) idx = kLutSize - 2;
    const double frac = u - idx;
    return lut[idx] + frac * (lut[idx + 1] - lut[idx]);
}

ToneCurve make_curve(const CurveSpec& spec) {
    spec.validate();
    ToneCurve c;
    if (spec.domain == CurveDomain::signed_detail) {
        c.dom_min = -1.0;
        c.dom_max = 1.0;
    } else {
        c.dom_min = 0.0;
        c.dom_max = 1.0;
    }
    c.active_min = c.dom_min;
    c.active_max = c.dom_max;
    c.lut.resize(ToneCurve::kLutSize);
    const int n = ToneCurve::kLutSize;
    const double step = (c.dom_max - c.dom_min) / (n - 1);
    auto sample_at = [&](int k) { return k == n - 1 ? c.dom_max : c.dom_min + k * step; };

    switch (spec.family) {
        case CurveFamily::identity:
            c.is_identity = true;
            for (int k = 0; k < n; ++k) c.lut[k] = sample_at(k);
            return c;

        case CurveFamily::linear_gain:
            for (int k = 0; k < n; ++k) c.lut[k] = spec.beta * sample_at(k);
            return c;

        case CurveFamily::s_curve:
        case CurveFamily::inverse_s_curve: {
            if (spec.domain == CurveDomain::signed_detail) {
                c.active_min = -spec.width;
                c.active_max = spec.width;
            } else {
                c.active_min = 0.5 - spec.width / 2.0;
                c.active_max = 0.5 + spec.width / 2.0;
            }
            std::vector<double> fwd(n);
            for (int k = 0; k < n; ++k) fwd[k] = forward_sample(spec, sample_at(k));
            if (spec.family == CurveFamily::s_curve) {
                c.lut = std::move(fwd);
                return c;
            }
            // Functional inverse on the active interval, identity outside:
            // binary-search each target in the monotone forward LUT and
            // inverse-interpolate inside the bracketing segment.
            for (int k = 0; k < n; ++k) {
                const double t = sample_at(k);
                if (t < c.active_min || t > c.active_max) {
                    c.lut[k] = t;
                    continue;
                }
                auto it = std::upper_bound(fwd.begin(), fwd.end(), t);
                int j = static_cast<int>(it - fwd.begin()) - 1;
                if (j < 0) j = 0;
                if (j > n - 2) j = n - 2;
                const double f0 = fwd[j], f1 = fwd[j + 1];
                double x = sample_at(j);
                if (f1 > f0) x += (t - f0) / (f1 - f0) * step;
                c.lut[k] = std::clamp(x, c.active_min, c.active_max);
            }
            return c;
        }

        case CurveFamily::gamma_s_curve: {
            CurveSpec s = spec;
            s.family = CurveFamily::s_curve;
            for (int k = 0; k < n; ++k) {
                const double t = sample_at(k);
                c.lut[k] = forward_sample(s, std::pow(t, spec.gamma));
            }
            return c;
        }
    }
    throw std::invalid_argument("unknown curve family");
}

ImagePlane apply_curve(const ToneCurve& c, const ImagePlane& p, int threads) {
    if (c.is_identity) return p;
    ImagePlane out(p.width, p.height);
    parallel_rows(p.height, threads, [&](int a, int b) {
        for (int y = a; y < b; ++y)
            for (int x = 0; x < p.width; ++x) out.at(x, y) = c.eval(p.at(x, y));
    });
    return out;
}

}  // namespace multilap
