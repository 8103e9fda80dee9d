#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <utility>
#include <vector>

#include "multilap/cascade.hpp"
#include "multilap/config.hpp"
#include "multilap/maskblend.hpp"
#include "multilap/pipeline.hpp"
#include "multilap/reference.hpp"

namespace py = pybind11;
using namespace multilap;

namespace {

using Array2d = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Array3d = py::array_t<double, py::array::c_style | py::array::forcecast>;

ImagePlane plane_from_array(const Array2d& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    ImagePlane p(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::copy_n(arr.data(), p.pixels(), p.v.data());
    return p;
}

py::array_t<double> array_from_plane(const ImagePlane& p) {
    py::array_t<double> out({p.height, p.width});
    std::copy_n(p.v.data(), p.pixels(), out.mutable_data());
    return out;
}

RgbImage rgb_from_array(const Array3d& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3)
        throw std::invalid_argument("expected an (H, W, 3) array");
    const int h = static_cast<int>(arr.shape(0)), w = static_cast<int>(arr.shape(1));
    RgbImage img(w, h);
    const double* d = arr.data();
    for (int i = 0; i < w * h; ++i) {
        img.r.v[i] = d[3 * i + 0];
        img.g.v[i] = d[3 * i + 1];
        img.b.v[i] = d[3 * i + 2];
    }
    return img;
}

py::array_t<double> array_from_rgb(const RgbImage& img) {
    const int h = img.height(), w = img.width();
    py::array_t<double> out({h, w, 3});
    double* d = out.mutable_data();
    for (int i = 0; i < w * h; ++i) {
        d[3 * i + 0] = img.r.v[i];
        d[3 * i + 1] = img.g.v[i];
        d[3 * i + 2] = img.b.v[i];
    }
    return out;
}

EnhanceConfig config_from_args(const std::string& preset, const std::string& config_text,
                               const std::vector<std::pair<std::string, std::string>>& overrides) {
    EnhanceConfig cfg;
    if (!preset.empty() && !config_text.empty())
        throw std::invalid_argument("pass either a preset or a config, not both");
    if (!preset.empty())
        cfg = resolve_preset(preset);
    else if (!config_text.empty())
        cfg = parse_config_text(config_text);
    else
        cfg = resolve_preset("identity");
    for (const auto& [key, value] : overrides) apply_override(cfg, key, value);
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_multilap, m) {
    m.doc() = "Edge-aware multi-scale image enhancement core";

    m.def(
        "make_config",
        [](const std::string& preset, const std::string& config_text,
           const std::vector<std::pair<std::string, std::string>>& overrides) {
            return serialize_config(config_from_args(preset, config_text, overrides));
        },
        py::arg("preset") = "", py::arg("config_text") = "",
        py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{});

    m.def(
        "enhance_plane",
        [](const Array2d& img, const std::string& config_text, int threads) {
            const EnhanceConfig cfg = parse_config_text(config_text);
            const ImagePlane p = plane_from_array(img);
            ImagePlane out;
            {
                py::gil_scoped_release release;
                out = enhance(p, cfg, threads < 1 ? 1 : threads);
            }
            return array_from_plane(out);
        },
        py::arg("image"), py::arg("config_text"), py::arg("threads") = 1);

    m.def(
        "enhance_rgb",
        [](const Array3d& img, const std::string& config_text, int threads) {
            const EnhanceConfig cfg = parse_config_text(config_text);
            const RgbImage rgb = rgb_from_array(img);
            RgbImage out;
            {
                py::gil_scoped_release release;
                out = enhance(rgb, cfg, threads < 1 ? 1 : threads);
            }
            return array_from_rgb(out);
        },
        py::arg("image"), py::arg("config_text"), py::arg("threads") = 1);

    m.def(
        "decompose",
        [](const Array2d& img, const std::string& config_text, int threads) {
            const EnhanceConfig cfg = parse_config_text(config_text);
            const ImagePlane p = plane_from_array(img);
            const FilterCascade cascade =
                build_cascade(p, cfg.kernel, cfg.levels, cfg.norm, threads < 1 ? 1 : threads);
            const LayerStack layers = decompose(p, cascade);
            py::list bands;
            for (const ImagePlane& b : layers.bands) bands.append(array_from_plane(b));
            return py::make_tuple(array_from_plane(layers.base), bands,
                                  array_from_plane(layers.high));
        },
        py::arg("image"), py::arg("config_text"), py::arg("threads") = 1);

    m.def(
        "structure_mask",
        [](const Array2d& img, const std::string& config_text) {
            const EnhanceConfig cfg = parse_config_text(config_text);
            const ImagePlane p = plane_from_array(img);
            const FilterCascade cascade = build_cascade(p, cfg.kernel, cfg.levels, cfg.norm);
            return array_from_plane(
                structure_mask(cascade, cfg.mask_source_level, cfg.mask_gamma).values);
        },
        py::arg("image"), py::arg("config_text"));

    m.def(
        "estimate_alpha",
        [](const Array2d& img, const std::string& config_text) {
            const EnhanceConfig cfg = parse_config_text(config_text);
            const WeightField w = build_weight_field(plane_from_array(img), cfg.kernel);
            const AlphaEstimate est = estimate_alpha(w, cfg.norm);
            return py::make_tuple(est.alpha, est.degenerate);
        },
        py::arg("image"), py::arg("config_text"));

    m.def("preset_names", [] {
        std::vector<std::string> names;
        for (const Preset& p : preset_registry()) names.push_back(p.name);
        return names;
    });

    m.def("verify", [] {
        std::ostringstream out;
        const bool ok = reference::run_verification(out);
        return py::make_tuple(ok, out.str());
    });
}
