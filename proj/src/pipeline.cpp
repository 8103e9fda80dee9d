#include "multilap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "multilap/maskblend.hpp"
#include "multilap/parallel.hpp"

namespace multilap {

namespace detail {
// Weight stacks above this entry count are evaluated in row bands so 12 MP
// images with 9x9 windows do not need the whole n*m field at once. The band
// split never changes results: every per-pixel quantity depends only on that
// pixel's own window, and level alphas are applied after all bands are done.
size_t& band_entry_limit() {
    static size_t limit = size_t(1) << 25;  // 256 MB of doubles per band
    return limit;
}
}  // namespace detail

namespace {

ImagePlane enhance_plane(const ImagePlane& y, const EnhanceConfig& cfg, int threads) {
    const int width = y.width, height = y.height;
    const int n = width * height;
    const int k = cfg.levels;
    const int m = cfg.kernel.window_size();
    const bool norm_free = cfg.norm.mode == NormKind::norm_free;
    const bool closed = norm_free && cfg.norm.alpha_strategy == AlphaStrategy::closed_form;

    if (y.empty()) throw std::invalid_argument("empty image");

    int band_rows = height;
    const size_t row_entries = static_cast<size_t>(width) * m;
    const size_t limit = detail::band_entry_limit();
    if (static_cast<size_t>(n) * m > limit)
        band_rows = static_cast<int>(std::max<size_t>(1, limit / row_entries));

    // Per level: un-normalized accumulation (K_l y)_i and degrees d_l,i.
    std::vector<ImagePlane> acc(k, ImagePlane(width, height));
    std::vector<std::vector<double>> deg(k, std::vector<double>(n));
    std::vector<int> valid(n);
    std::vector<double> tr_k2(k, 0.0), tr_kdinvk(k, 0.0);

    std::vector<double> wband(static_cast<size_t>(std::min(band_rows, height)) * row_entries);
    std::vector<double> dband(static_cast<size_t>(std::min(band_rows, height)) * width);
    std::vector<int> cband(dband.size());

    for (int r0 = 0; r0 < height; r0 += band_rows) {
        const int r1 = std::min(height, r0 + band_rows);
        const int rows = r1 - r0;
        detail::build_weight_rows(y, cfg.kernel, r0, r1, wband.data(), dband.data(), cband.data(),
                                  threads);
        std::copy_n(cband.data(), static_cast<size_t>(rows) * width,
                    valid.data() + static_cast<size_t>(r0) * width);
        for (int l = 0; l < k; ++l) {
            if (l > 0)
                detail::square_weight_rows(wband.data(), dband.data(), cband.data(), rows, width,
                                           m, threads);
            detail::accumulate_rows(wband.data(), r0, r1, width, height, cfg.kernel.window_radius,
                                    y, acc[l].v.data() + static_cast<size_t>(r0) * width, threads);
            std::copy_n(dband.data(), static_cast<size_t>(rows) * width,
                        deg[l].data() + static_cast<size_t>(r0) * width);
            if (closed) {
                // Band-sequential accumulation keeps the summation order of
                // row_square_sums on the full field.
                for (int i = 0; i < rows * width; ++i) {
                    const double* wrow = wband.data() + static_cast<size_t>(i) * m;
                    double rs = 0.0;
                    for (int o = 0; o < m; ++o) rs += wrow[o] * wrow[o];
                    tr_k2[l] += rs;
                    tr_kdinvk[l] += rs / dband[i];
                }
            }
        }
    }

    // z_l in place of the accumulations, then layers.
    for (int l = 0; l < k; ++l) {
        if (norm_free) {
            double s1 = 0.0, s2 = 0.0;
            for (double d : deg[l]) {
                s1 += d;
                s2 += d * d;
            }
            const double alpha = detail::alpha_from_stats(cfg.norm.alpha_strategy,
                                                          cfg.norm.fixed_alpha, n, s1, s2,
                                                          tr_k2[l], tr_kdinvk[l])
                                     .alpha;
            for (int i = 0; i < n; ++i)
                acc[l].v[i] = y.v[i] + alpha * (acc[l].v[i] - deg[l][i] * y.v[i]);
        } else {
            for (int i = 0; i < n; ++i) acc[l].v[i] /= deg[l][i];
        }
    }

    ImagePlane mapped_base = apply_curve(make_curve(cfg.curves[0]), acc[0], threads);
    std::vector<ImagePlane> mapped_bands;
    mapped_bands.reserve(k - 1);
    ImagePlane scratch(width, height);
    for (int l = 1; l < k; ++l) {
        for (int i = 0; i < n; ++i) scratch.v[i] = acc[l].v[i] - acc[l - 1].v[i];
        mapped_bands.push_back(apply_curve(make_curve(cfg.curves[l]), scratch, threads));
    }
    for (int i = 0; i < n; ++i) scratch.v[i] = y.v[i] - acc[k - 1].v[i];
    ImagePlane mapped_high = apply_curve(make_curve(cfg.curves[k]), scratch, threads);

    if (!cfg.mask_enabled)
        return blend(mapped_base, mapped_bands, mapped_high, nullptr, threads);
    StructureMask mask = detail::mask_from_degrees(deg[cfg.mask_source_level - 1], valid, width,
                                                   height, cfg.mask_gamma);
    return blend(mapped_base, mapped_bands, mapped_high, &mask, threads);
}

EnhanceConfig shared_preset_base() {
    EnhanceConfig cfg;
    cfg.kernel.kind = KernelKind::nlm;
    cfg.kernel.h_y = 0.7;
    cfg.kernel.spatial_term = false;
    cfg.kernel.window_radius = 2;  // 5x5 window
    cfg.kernel.patch_radius = 1;   // 3x3 patch
    cfg.levels = 2;
    cfg.norm.mode = NormKind::norm_free;
    cfg.norm.alpha_strategy = AlphaStrategy::inverse_mean_degree;
    cfg.mask_source_level = 1;
    cfg.mask_gamma = 1.0;
    cfg.color_mode = ColorMode::luma_only;
    cfg.curves.resize(3);
    cfg.curves[0].domain = CurveDomain::base;
    cfg.curves[1].domain = CurveDomain::signed_detail;
    cfg.curves[2].domain = CurveDomain::signed_detail;
    return cfg;
}

CurveSpec s_curve(CurveDomain domain, double a, double width) {
    CurveSpec c;
    c.family = CurveFamily::s_curve;
    c.domain = domain;
    c.a = a;
    c.width = width;
    return c;
}

std::vector<Preset> make_registry() {
    std::vector<Preset> presets;

    {
        Preset p;
        p.name = "identity";
        p.config = shared_preset_base();
        p.config.mask_enabled = false;
        presets.push_back(std::move(p));
    }
    {
        // Edge-aware smoothing: drop the fine layer, compress the medium one.
        Preset p;
        p.name = "smooth";
        p.config = shared_preset_base();
        p.config.mask_enabled = false;
        p.config.curves[1] = s_curve(CurveDomain::signed_detail, 10.0, 0.2);
        p.config.curves[2].family = CurveFamily::linear_gain;
        p.config.curves[2].beta = 0.0;
        presets.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "sharpen";
        p.config = shared_preset_base();
        p.config.mask_enabled = true;
        p.config.curves[0] = s_curve(CurveDomain::base, 6.0, 0.75);
        p.config.curves[1] = s_curve(CurveDomain::signed_detail, 50.0, 0.33);
        p.config.curves[2] = s_curve(CurveDomain::signed_detail, 20.0, 0.66);
        presets.push_back(std::move(p));
    }
    {
        // Suppress the fine scale, boost medium and base.
        Preset p;
        p.name = "denoise_sharpen";
        p.config = shared_preset_base();
        p.config.mask_enabled = true;
        p.config.curves[0] = s_curve(CurveDomain::base, 5.0, 0.75);
        p.config.curves[1] = s_curve(CurveDomain::signed_detail, 60.0, 0.45);
        p.config.curves[2] = s_curve(CurveDomain::signed_detail, 10.0, 1.0);
        p.config.curves[2].family = CurveFamily::inverse_s_curve;
        presets.push_back(std::move(p));
    }
    return presets;
}

}  // namespace

void EnhanceConfig::validate() const {
    kernel.validate();
    norm.validate();
    if (levels < 1) throw std::invalid_argument("level count must be >= 1");
    if (curves.size() != static_cast<size_t>(levels) + 1)
        throw std::invalid_argument("config needs exactly levels+1 curves");
    if (curves[0].domain != CurveDomain::base)
        throw std::invalid_argument("base curve must use the base domain");
    for (size_t i = 1; i < curves.size(); ++i)
        if (curves[i].domain != CurveDomain::signed_detail)
            throw std::invalid_argument("detail curves must use the signed domain");
    for (const CurveSpec& c : curves) c.validate();
    if (mask_source_level < 1 || mask_source_level > levels)
        throw std::invalid_argument("mask source level out of range");
    if (mask_gamma <= 0.0) throw std::invalid_argument("mask gamma must be > 0");
}

const std::vector<Preset>& preset_registry() {
    static const std::vector<Preset> registry = make_registry();
    return registry;
}

EnhanceConfig resolve_preset(std::string_view name) {
    std::string canonical(name);
    std::replace(canonical.begin(), canonical.end(), '-', '_');
    for (const Preset& p : preset_registry())
        if (p.name == canonical) return p.config;
    throw std::invalid_argument("unknown preset: " + std::string(name));
}

ImagePlane enhance(const ImagePlane& y, const EnhanceConfig& config, int threads) {
    config.validate();
    return enhance_plane(y, config, threads);
}

YuvImage enhance_yuv(YuvImage image, const EnhanceConfig& config, int threads) {
    config.validate();
    YuvImage out;
    out.y = enhance_plane(image.y, config, threads);
    out.cb = std::move(image.cb);
    out.cr = std::move(image.cr);
    return out;
}

RgbImage enhance(const RgbImage& image, const EnhanceConfig& config, int threads) {
    config.validate();
    if (config.color_mode == ColorMode::per_channel_rgb) {
        RgbImage out;
        out.r = enhance_plane(image.r, config, threads);
        out.g = enhance_plane(image.g, config, threads);
        out.b = enhance_plane(image.b, config, threads);
        return out;
    }
    return yuv_to_rgb(enhance_yuv(rgb_to_yuv(image), config, threads));
}

PlaneDiagnostics enhance_diagnostics(const ImagePlane& y, const EnhanceConfig& config,
                                     int threads) {
    config.validate();
    PlaneDiagnostics diag;
    FilterCascade cascade = build_cascade(y, config.kernel, config.levels, config.norm, threads);
    diag.layers = decompose(y, cascade, threads);
    diag.mask = structure_mask(cascade, config.mask_source_level, config.mask_gamma).values;
    const WeightField& w1 = cascade.levels.front();
    diag.degree_ratio = ImagePlane(y.width, y.height);
    for (int i = 0; i < y.pixels(); ++i)
        diag.degree_ratio.v[i] = w1.degree[i] / w1.valid_count[i];
    return diag;
}

}  // namespace multilap
