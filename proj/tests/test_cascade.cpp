#include <cmath>

#include "doctest.h"
#include "multilap/cascade.hpp"
#include "multilap/reference.hpp"
#include "support/test_support.hpp"

using namespace multilap;
using namespace testsupport;

namespace {

KernelParams nlm_params() {
    KernelParams p;
    p.h_y = 0.7;
    p.window_radius = 2;
    p.patch_radius = 1;
    return p;
}

double reconstruction_error(const ImagePlane& y, const LayerStack& s) {
    double err = 0.0;
    for (int i = 0; i < y.pixels(); ++i) {
        double sum = s.base.v[i] + s.high.v[i];
        for (const ImagePlane& b : s.bands) sum += b.v[i];
        err = std::max(err, std::abs(sum - y.v[i]));
    }
    return err;
}

}  // namespace

TEST_CASE("hadamard squaring") {
    auto rng = make_rng(16180);
    const ImagePlane y = random_plane(rng, 8, 8);
    const KernelParams p = nlm_params();
    const WeightField w = build_weight_field(y, p);

    SUBCASE("equals an explicit rebuild at h/2") {
        const WeightField sq = hadamard_square(w);
        const WeightField rebuilt = build_weight_field(y, p.halved());
        for (size_t i = 0; i < sq.weights.size(); ++i)
            CHECK(std::abs(sq.weights[i] - rebuilt.weights[i]) <= 1e-9);
        for (int i = 0; i < sq.pixels(); ++i) {
            CHECK(std::abs(sq.degree[i] - rebuilt.degree[i]) <= 1e-9);
            CHECK(sq.valid_count[i] == rebuilt.valid_count[i]);
        }
    }
    SUBCASE("twice equals a rebuild at h/4") {
        const WeightField sq2 = hadamard_square(hadamard_square(w));
        const WeightField rebuilt = build_weight_field(y, p.halved().halved());
        for (size_t i = 0; i < sq2.weights.size(); ++i)
            CHECK(std::abs(sq2.weights[i] - rebuilt.weights[i]) <= 1e-9);
    }
    SUBCASE("constant fields are fixed points") {
        ImagePlane c(5, 5, 0.8);
        const WeightField wc = build_weight_field(c, p);
        const WeightField sq = hadamard_square(wc);
        for (size_t i = 0; i < sq.weights.size(); ++i) CHECK(sq.weights[i] == wc.weights[i]);
    }
    SUBCASE("spatial term halves h_x as well") {
        KernelParams sp = p;
        sp.spatial_term = true;
        sp.h_x = 5.0;
        const WeightField ws = build_weight_field(y, sp);
        const WeightField sq = hadamard_square(ws);
        const WeightField rebuilt = build_weight_field(y, sp.halved());
        for (size_t i = 0; i < sq.weights.size(); ++i)
            CHECK(std::abs(sq.weights[i] - rebuilt.weights[i]) <= 1e-9);
    }
}

TEST_CASE("exp evaluations happen once per off-center valid pair, independent of k") {
    auto rng = make_rng(31415);
    const ImagePlane y = random_plane(rng, 9, 7);
    const KernelParams p = nlm_params();
    NormMode nm;

    instrument::reset_exp_calls();
    const FilterCascade c1 = build_cascade(y, p, 1, nm);
    const uint64_t calls_k1 = instrument::exp_call_count();

    uint64_t expected = 0;
    for (int count : c1.levels[0].valid_count) expected += count - 1;  // center is exact
    CHECK(calls_k1 == expected);

    instrument::reset_exp_calls();
    const FilterCascade c4 = build_cascade(y, p, 4, nm);
    CHECK(instrument::exp_call_count() == expected);
    CHECK(c4.level_count() == 4);
}

TEST_CASE("cascade structure") {
    auto rng = make_rng(2718);
    const ImagePlane y = random_plane(rng, 8, 6);
    const KernelParams p = nlm_params();
    NormMode nm;
    nm.mode = NormKind::norm_free;

    const FilterCascade c = build_cascade(y, p, 3, nm);
    CHECK(c.level_count() == 3);
    CHECK(c.alphas.size() == 3);

    SUBCASE("levels square the previous level exactly") {
        for (int l = 1; l < 3; ++l)
            for (size_t i = 0; i < c.levels[l].weights.size(); ++i)
                CHECK(c.levels[l].weights[i] ==
                      c.levels[l - 1].weights[i] * c.levels[l - 1].weights[i]);
    }
    SUBCASE("degrees never increase with level") {
        for (int l = 1; l < 3; ++l)
            for (int i = 0; i < y.pixels(); ++i)
                CHECK(c.levels[l].degree[i] <= c.levels[l - 1].degree[i] + 1e-12);
    }
    SUBCASE("level 2 equals an explicit build at h/2") {
        const WeightField rebuilt = build_weight_field(y, p.halved());
        for (size_t i = 0; i < rebuilt.weights.size(); ++i)
            CHECK(std::abs(c.levels[1].weights[i] - rebuilt.weights[i]) <= 1e-9);
    }
    SUBCASE("deeper cascades leave w1 untouched") {
        const FilterCascade shallow = build_cascade(y, p, 2, nm);
        for (size_t i = 0; i < shallow.levels[0].weights.size(); ++i)
            CHECK(shallow.levels[0].weights[i] == c.levels[0].weights[i]);
    }
    SUBCASE("k < 1 is rejected") {
        CHECK_THROWS_AS(build_cascade(y, p, 0, nm), std::invalid_argument);
    }
}

TEST_CASE("decompose") {
    auto rng = make_rng(6283);
    const KernelParams p = nlm_params();

    SUBCASE("constant image: constant base, zero details") {
        ImagePlane c(6, 6, 0.25);
        for (NormKind mode : {NormKind::exact, NormKind::norm_free}) {
            NormMode nm;
            nm.mode = mode;
            const LayerStack s = decompose(c, build_cascade(c, p, 3, nm));
            for (int i = 0; i < c.pixels(); ++i) {
                CHECK(s.base.v[i] == doctest::Approx(0.25).epsilon(1e-12));
                CHECK(std::abs(s.high.v[i]) <= 1e-12);
                for (const ImagePlane& b : s.bands) CHECK(std::abs(b.v[i]) <= 1e-12);
            }
        }
    }
    SUBCASE("telescoping reconstruction for every k and both modes") {
        const ImagePlane y = random_plane(rng, 9, 8);
        for (int k : {1, 2, 3, 4}) {
            for (NormKind mode : {NormKind::exact, NormKind::norm_free}) {
                NormMode nm;
                nm.mode = mode;
                const FilterCascade c = build_cascade(y, p, k, nm);
                const LayerStack s = decompose(y, c);
                CHECK(static_cast<int>(s.bands.size()) == k - 1);
                CHECK(reconstruction_error(y, s) <= 1e-9);
                for (const ImagePlane& b : s.bands) {
                    double energy = 0.0;
                    for (double v : b.v) energy += v * v;
                    CHECK(std::isfinite(energy));
                    CHECK(energy >= 0.0);
                }
            }
        }
    }
    SUBCASE("k=1 reduces to smooth plus residual") {
        const ImagePlane y = random_plane(rng, 7, 7);
        NormMode nm;
        nm.mode = NormKind::exact;
        const FilterCascade c = build_cascade(y, p, 1, nm);
        const LayerStack s = decompose(y, c);
        CHECK(s.bands.empty());
        const ImagePlane smooth = apply_exact(c.levels[0], y);
        CHECK(max_abs_diff(s.base, smooth) == 0.0);
        for (int i = 0; i < y.pixels(); ++i)
            CHECK(s.high.v[i] == doctest::Approx(y.v[i] - smooth.v[i]).epsilon(1e-15));
    }
    SUBCASE("1x4 step fixture equals the dense layer computation") {
        ImagePlane y(4, 1);
        y.v = {0.0, 0.0, 1.0, 1.0};
        KernelParams fp;
        fp.h_y = 1.0;
        fp.window_radius = 3;  // full window
        fp.patch_radius = 0;
        NormMode nm;
        nm.mode = NormKind::exact;
        const LayerStack s = decompose(y, build_cascade(y, fp, 2, nm));

        const auto w1 = reference::dense_assemble(y, fp, NormKind::exact);
        const auto w2 = reference::dense_assemble(y, fp.halved(), NormKind::exact);
        const ImagePlane z1 = reference::apply_dense(w1, y);
        const ImagePlane z2 = reference::apply_dense(w2, y);
        for (int i = 0; i < 4; ++i) {
            CHECK(s.base.v[i] == doctest::Approx(z1.v[i]).epsilon(1e-9));
            CHECK(s.bands[0].v[i] == doctest::Approx(z2.v[i] - z1.v[i]).epsilon(1e-9));
            CHECK(s.high.v[i] == doctest::Approx(y.v[i] - z2.v[i]).epsilon(1e-9));
        }
    }
    SUBCASE("dimension mismatch") {
        const ImagePlane y = random_plane(rng, 5, 5);
        NormMode nm;
        const FilterCascade c = build_cascade(y, p, 2, nm);
        ImagePlane wrong(6, 5, 0.1);
        CHECK_THROWS_AS(decompose(wrong, c), std::invalid_argument);
    }
}

TEST_CASE("laplacian forms") {
    auto rng = make_rng(141421);
    const ImagePlane y = random_plane(rng, 7, 6);
    const KernelParams p = nlm_params();
    const WeightField w = build_weight_field(y, p);
    const double alpha = 1.0 / field_stats(w).d_bar;

    SUBCASE("constants are annihilated") {
        ImagePlane c(7, 6, 0.5);
        const WeightField wc = build_weight_field(c, p);
        const ImagePlane rw = laplacian_apply(wc, c, LaplacianForm::random_walk);
        const ImagePlane un = laplacian_apply(wc, c, LaplacianForm::unnormalized, alpha);
        for (int i = 0; i < c.pixels(); ++i) {
            CHECK(std::abs(rw.v[i]) <= 1e-12);
            CHECK(std::abs(un.v[i]) <= 1e-12);
        }
    }
    SUBCASE("random walk is apply_exact minus identity") {
        const ImagePlane rw = laplacian_apply(w, y, LaplacianForm::random_walk);
        const ImagePlane z = apply_exact(w, y);
        for (int i = 0; i < y.pixels(); ++i)
            CHECK(rw.v[i] == doctest::Approx(z.v[i] - y.v[i]).epsilon(1e-12));
    }
    SUBCASE("unnormalized form matches the norm-free filter minus identity") {
        const ImagePlane un = laplacian_apply(w, y, LaplacianForm::unnormalized, alpha);
        const ImagePlane zf = apply_norm_free(w, y, alpha);
        for (int i = 0; i < y.pixels(); ++i)
            CHECK(std::abs(un.v[i] - (zf.v[i] - y.v[i])) <= 1e-12);
    }
    SUBCASE("unnormalized form requires positive alpha") {
        CHECK_THROWS_AS(laplacian_apply(w, y, LaplacianForm::unnormalized, 0.0),
                        std::invalid_argument);
    }
    SUBCASE("constant image with a full window: the two forms coincide at alpha = 1/n") {
        ImagePlane c(4, 4, 0.7);
        KernelParams fp = p;
        fp.window_radius = 3;
        const WeightField wc = build_weight_field(c, fp);
        const ImagePlane rw = laplacian_apply(wc, c, LaplacianForm::random_walk);
        const ImagePlane un = laplacian_apply(wc, c, LaplacianForm::unnormalized, 1.0 / 16.0);
        for (int i = 0; i < 16; ++i) CHECK(std::abs(rw.v[i] - un.v[i]) <= 1e-12);
    }
}
