#include <cmath>

#include "doctest.h"
#include "multilap/cascade.hpp"
#include "multilap/maskblend.hpp"
#include "multilap/tonemap.hpp"
#include "support/test_support.hpp"

using namespace multilap;
using namespace testsupport;

namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Closed-form signed s-curve, for checking the LUT against.
double s_formula(double t, double a, double w) {
    if (std::abs(t) >= w) return t;
    const double norm = 2.0 * sigmoid(a) - 1.0;
    const double v = w * (2.0 * sigmoid(a * std::abs(t) / w) - 1.0) / norm;
    return t < 0 ? -v : v;
}

CurveSpec spec_of(CurveFamily family, CurveDomain domain, double a, double w) {
    CurveSpec s;
    s.family = family;
    s.domain = domain;
    s.a = a;
    s.width = w;
    return s;
}

}  // namespace

TEST_CASE("s-curve passes through 0 and the width boundary exactly") {
    for (double a : {2.0, 10.0, 20.0, 50.0}) {
        for (double w : {0.2, 0.33, 0.66, 1.0}) {
            const ToneCurve c =
                make_curve(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, a, w));
            CHECK(c.eval(0.0) == 0.0);
            CHECK(c.eval(w) == w);
            CHECK(c.eval(-w) == -w);
            CHECK(c.eval(1.0) == 1.0);
            CHECK(c.eval(-1.0) == -1.0);
        }
    }
}

TEST_CASE("base-domain curves preserve the endpoints") {
    for (double w : {0.5, 0.75, 1.0}) {
        const ToneCurve c = make_curve(spec_of(CurveFamily::s_curve, CurveDomain::base, 6.0, w));
        CHECK(c.eval(0.0) == 0.0);
        CHECK(c.eval(1.0) == 1.0);
        CHECK(c.eval(0.5) == 0.5);
    }
    CurveSpec g = spec_of(CurveFamily::gamma_s_curve, CurveDomain::base, 5.0, 0.8);
    g.gamma = 0.75;
    const ToneCurve c = make_curve(g);
    CHECK(c.eval(0.0) == 0.0);
    CHECK(c.eval(1.0) == 1.0);
}

TEST_CASE("central slope of a strong s-curve is a/2 normalized") {
    const double a = 20.0, w = 1.0;
    const ToneCurve c = make_curve(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, a, w));
    const double h = 4.0 / (ToneCurve::kLutSize - 1);
    const double slope = (c.eval(h) - c.eval(-h)) / (2.0 * h);
    const double expected = (a / 2.0) / (2.0 * sigmoid(a) - 1.0);  // ~10.0
    CHECK(expected == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(slope == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("LUT agrees with the closed form away from the lattice") {
    const double a = 10.0, w = 0.2;
    const ToneCurve c = make_curve(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, a, w));
    for (int i = 0; i <= 1000; ++i) {
        const double t = -1.0 + 2.0 * i / 1000.0;
        CHECK(std::abs(c.eval(t) - s_formula(t, a, w)) <= 1e-4);
    }
}

TEST_CASE("inverse composed with forward is the identity on the active range") {
    const double a = 5.0, w = 0.8;
    const ToneCurve fwd =
        make_curve(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, a, w));
    const ToneCurve inv =
        make_curve(spec_of(CurveFamily::inverse_s_curve, CurveDomain::signed_detail, a, w));
    const double tol = 2.0 / ToneCurve::kLutSize;
    for (int i = 0; i <= 400; ++i) {
        const double t = -w + 2.0 * w * i / 400.0;
        CHECK(std::abs(inv.eval(fwd.eval(t)) - t) <= tol);
    }
    // The inverse suppresses rather than boosts around zero.
    const double h = 0.01;
    CHECK((inv.eval(h) - inv.eval(-h)) / (2.0 * h) < 1.0);
}

TEST_CASE("every generated LUT is monotone") {
    std::vector<CurveSpec> specs;
    specs.push_back(spec_of(CurveFamily::identity, CurveDomain::signed_detail, 1, 1));
    specs.push_back(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, 20, 0.66));
    specs.push_back(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, 60, 0.45));
    specs.push_back(spec_of(CurveFamily::s_curve, CurveDomain::base, 6, 0.75));
    specs.push_back(spec_of(CurveFamily::inverse_s_curve, CurveDomain::signed_detail, 10, 1.0));
    specs.push_back(spec_of(CurveFamily::inverse_s_curve, CurveDomain::signed_detail, 60, 0.5));
    CurveSpec lin = spec_of(CurveFamily::linear_gain, CurveDomain::signed_detail, 1, 1);
    lin.beta = 3.0;
    specs.push_back(lin);
    CurveSpec gam = spec_of(CurveFamily::gamma_s_curve, CurveDomain::base, 8, 0.6);
    gam.gamma = 0.5;
    specs.push_back(gam);

    for (const CurveSpec& s : specs) {
        const ToneCurve c = make_curve(s);
        for (size_t i = 1; i < c.lut.size(); ++i) CHECK(c.lut[i] >= c.lut[i - 1]);
    }
}

TEST_CASE("odd symmetry of signed s-curves") {
    const ToneCurve c =
        make_curve(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, 30.0, 0.6));
    auto rng = make_rng(515);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double t = uni(rng);
        CHECK(std::abs(c.eval(t) + c.eval(-t)) <= 1e-9);
    }
}

TEST_CASE("identity outside the active width, exactly") {
    const double w = 0.4;
    const ToneCurve c =
        make_curve(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, 25.0, w));
    auto rng = make_rng(516);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double t = uni(rng);
        if (std::abs(t) > w) CHECK(c.eval(t) == t);
    }
    // Overshoot beyond the nominal domain is identity too.
    CHECK(c.eval(1.3) == 1.3);
    CHECK(c.eval(-2.0) == -2.0);
}

TEST_CASE("apply_curve") {
    auto rng = make_rng(517);
    SUBCASE("identity is bit-exact") {
        ImagePlane p = random_plane(rng, 9, 5);
        p.v[3] = 1.7;  // out-of-range values survive untouched
        p.v[7] = -0.4;
        const ToneCurve c = make_curve(CurveSpec{});
        const ImagePlane out = apply_curve(c, p);
        for (int i = 0; i < p.pixels(); ++i) CHECK(out.v[i] == p.v[i]);
    }
    SUBCASE("linear gain scales") {
        CurveSpec s;
        s.family = CurveFamily::linear_gain;
        s.beta = 5.0;
        ImagePlane p(4, 3, 0.1);
        const ImagePlane out = apply_curve(make_curve(s), p);
        for (int i = 0; i < p.pixels(); ++i)
            CHECK(out.v[i] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("s-curve on a ramp is monotone and matches the formula") {
        const double a = 10.0, w = 0.2;
        ImagePlane ramp(256, 1);
        for (int i = 0; i < 256; ++i) ramp.v[i] = -1.0 + 2.0 * i / 255.0;
        const ImagePlane out = apply_curve(
            make_curve(spec_of(CurveFamily::s_curve, CurveDomain::signed_detail, a, w)), ramp);
        for (int i = 1; i < 256; ++i) CHECK(out.v[i] >= out.v[i - 1]);
        for (int i = 0; i < 256; ++i)
            CHECK(std::abs(out.v[i] - s_formula(ramp.v[i], a, w)) <= 1e-4);
    }
}

TEST_CASE("invalid curve specs are rejected") {
    CurveSpec s;
    s.family = CurveFamily::s_curve;
    s.a = 0.0;
    CHECK_THROWS_AS(make_curve(s), std::invalid_argument);
    s.a = 10.0;
    s.width = 0.0;
    CHECK_THROWS_AS(make_curve(s), std::invalid_argument);
    s.width = 1.5;
    CHECK_THROWS_AS(make_curve(s), std::invalid_argument);
    CurveSpec g;
    g.family = CurveFamily::gamma_s_curve;
    g.domain = CurveDomain::signed_detail;  // gamma needs the base domain
    CHECK_THROWS_AS(make_curve(g), std::invalid_argument);
    g.domain = CurveDomain::base;
    g.gamma = -1.0;
    CHECK_THROWS_AS(make_curve(g), std::invalid_argument);
    CurveSpec l;
    l.family = CurveFamily::linear_gain;
    l.beta = -2.0;
    CHECK_THROWS_AS(make_curve(l), std::invalid_argument);
}

TEST_CASE("linear-gain scheme reproduces the random-walk Laplacian form") {
    // With T_1(t) = b1 t on the base and T_2(t) = b2 t on the residual (k=1),
    // the blended output is b1 y + (b1 - b2)(W - I) y.
    auto rng = make_rng(518);
    const ImagePlane y = random_plane(rng, 8, 7);
    KernelParams p;
    p.h_y = 0.7;
    p.window_radius = 2;
    p.patch_radius = 1;
    const double b1 = 0.8, b2 = 0.3;

    NormMode nm;
    nm.mode = NormKind::exact;
    const FilterCascade c = build_cascade(y, p, 1, nm);
    const LayerStack s = decompose(y, c);

    CurveSpec base_spec;
    base_spec.family = CurveFamily::linear_gain;
    base_spec.domain = CurveDomain::base;
    base_spec.beta = b1;
    CurveSpec high_spec;
    high_spec.family = CurveFamily::linear_gain;
    high_spec.domain = CurveDomain::signed_detail;
    high_spec.beta = b2;

    const ImagePlane z = blend(apply_curve(make_curve(base_spec), s.base), {},
                               apply_curve(make_curve(high_spec), s.high), nullptr);

    const ImagePlane lap = laplacian_apply(c.levels[0], y, LaplacianForm::random_walk);
    for (int i = 0; i < y.pixels(); ++i) {
        const double expected = b1 * y.v[i] + (b1 - b2) * lap.v[i];
        CHECK(std::abs(z.v[i] - expected) <= 1e-6);
    }
}
