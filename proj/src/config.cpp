#include <cmath>
#include "multilap/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace multilap {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw std::invalid_argument("expected on/off, got '" + v + "'");
}

double parse_double(const std::string& v) {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("bad number '" + v + "'");
    return d;
}

int parse_int(const std::string& v) {
    size_t pos = 0;
    int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("bad integer '" + v + "'");
    return i;
}

const char* family_name(CurveFamily f) {
    switch (f) {
        case CurveFamily::identity: return "identity";
        case CurveFamily::linear_gain: return "linear_gain";
        case CurveFamily::s_curve: return "s_curve";
        case CurveFamily::inverse_s_curve: return "inverse_s_curve";
        case CurveFamily::gamma_s_curve: return "gamma_s_curve";
    }
    return "?";
}

CurveFamily parse_family(const std::string& v) {
    if (v == "identity") return CurveFamily::identity;
    if (v == "linear_gain") return CurveFamily::linear_gain;
    if (v == "s_curve") return CurveFamily::s_curve;
    if (v == "inverse_s_curve") return CurveFamily::inverse_s_curve;
    if (v == "gamma_s_curve") return CurveFamily::gamma_s_curve;
    throw std::invalid_argument("unknown curve family '" + v + "'");
}

std::string layer_name(const EnhanceConfig& c, int index) {
    if (index == 0) return "base";
    if (index == c.levels) return "high";
    return "band" + std::to_string(index);
}

int layer_index(const EnhanceConfig& c, const std::string& name) {
    if (name == "base") return 0;
    if (name == "high") return c.levels;
    if (name.rfind("band", 0) == 0) {
        int i = parse_int(name.substr(4));
        if (i >= 1 && i <= c.levels - 1) return i;
    }
    throw std::invalid_argument("unknown layer '" + name + "' for " +
                                std::to_string(c.levels) + " levels");
}

void resize_levels(EnhanceConfig& c, int k) {
    if (k < 1) throw std::invalid_argument("levels must be >= 1");
    CurveSpec base = c.curves.empty() ? CurveSpec{} : c.curves.front();
    base.domain = CurveDomain::base;
    CurveSpec high = c.curves.size() >= 2 ? c.curves.back() : CurveSpec{};
    high.domain = CurveDomain::signed_detail;
    std::vector<CurveSpec> bands;
    if (c.curves.size() >= 3)
        bands.assign(c.curves.begin() + 1, c.curves.end() - 1);
    bands.resize(k - 1);  // new bands default to identity
    for (CurveSpec& b : bands) b.domain = CurveDomain::signed_detail;

    c.curves.clear();
    c.curves.push_back(base);
    for (CurveSpec& b : bands) c.curves.push_back(b);
    c.curves.push_back(high);
    c.levels = k;
    if (c.mask_source_level > k) c.mask_source_level = k;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    if (std::abs(v) < 1e15 && v == std::floor(v)) {
        snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        if (sscanf(buf, "%lf", &back) == 1 && back == v) break;
    }
    return buf;
}

std::string serialize_config(const EnhanceConfig& c) {
    std::ostringstream out;
    out << "# multilap enhancement configuration\n";
    out << "kernel.kind = " << (c.kernel.kind == KernelKind::nlm ? "nlm" : "bilateral") << "\n";
    out << "kernel.window = " << c.kernel.window_radius << "\n";
    out << "kernel.patch = " << c.kernel.patch_radius << "\n";
    out << "kernel.h = " << format_double(c.kernel.h_y) << "\n";
    out << "kernel.spatial = " << (c.kernel.spatial_term ? "on" : "off") << "\n";
    if (c.kernel.spatial_term) out << "kernel.hx = " << format_double(c.kernel.h_x) << "\n";
    out << "levels = " << c.levels << "\n";
    out << "norm.mode = " << (c.norm.mode == NormKind::exact ? "exact" : "fast") << "\n";
    out << "norm.alpha = ";
    switch (c.norm.alpha_strategy) {
        case AlphaStrategy::closed_form: out << "closed"; break;
        case AlphaStrategy::trace_ratio: out << "trace"; break;
        case AlphaStrategy::inverse_mean_degree: out << "invmean"; break;
        case AlphaStrategy::fixed: out << format_double(c.norm.fixed_alpha); break;
    }
    out << "\n";
    out << "mask.enabled = " << (c.mask_enabled ? "on" : "off") << "\n";
    out << "mask.source_level = " << c.mask_source_level << "\n";
    out << "mask.gamma = " << format_double(c.mask_gamma) << "\n";
    out << "color = " << (c.color_mode == ColorMode::luma_only ? "luma" : "rgb") << "\n";
    for (size_t i = 0; i < c.curves.size(); ++i) {
        const CurveSpec& s = c.curves[i];
        const std::string key = "curve." + layer_name(c, static_cast<int>(i));
        out << key << ".family = " << family_name(s.family) << "\n";
        switch (s.family) {
            case CurveFamily::identity:
                break;
            case CurveFamily::linear_gain:
                out << key << ".beta = " << format_double(s.beta) << "\n";
                break;
            case CurveFamily::gamma_s_curve:
                out << key << ".gamma = " << format_double(s.gamma) << "\n";
                [[fallthrough]];
            case CurveFamily::s_curve:
            case CurveFamily::inverse_s_curve:
                out << key << ".a = " << format_double(s.a) << "\n";
                out << key << ".width = " << format_double(s.width) << "\n";
                break;
        }
    }
    return out.str();
}

void apply_override(EnhanceConfig& c, const std::string& key, const std::string& value) {
    if (key == "kernel.kind") {
        if (value == "nlm") c.kernel.kind = KernelKind::nlm;
        else if (value == "bilateral") c.kernel.kind = KernelKind::bilateral;
        else throw std::invalid_argument("unknown kernel '" + value + "'");
    } else if (key == "kernel.window") {
        c.kernel.window_radius = parse_int(value);
    } else if (key == "kernel.patch") {
        c.kernel.patch_radius = parse_int(value);
    } else if (key == "kernel.h") {
        c.kernel.h_y = parse_double(value);
    } else if (key == "kernel.spatial") {
        c.kernel.spatial_term = parse_bool(value);
    } else if (key == "kernel.hx") {
        c.kernel.h_x = parse_double(value);
    } else if (key == "levels") {
        resize_levels(c, parse_int(value));
    } else if (key == "norm.mode") {
        if (value == "exact") c.norm.mode = NormKind::exact;
        else if (value == "fast" || value == "norm_free") c.norm.mode = NormKind::norm_free;
        else throw std::invalid_argument("unknown norm mode '" + value + "'");
    } else if (key == "norm.alpha") {
        if (value == "closed") c.norm.alpha_strategy = AlphaStrategy::closed_form;
        else if (value == "trace") c.norm.alpha_strategy = AlphaStrategy::trace_ratio;
        else if (value == "invmean") c.norm.alpha_strategy = AlphaStrategy::inverse_mean_degree;
        else {
            c.norm.alpha_strategy = AlphaStrategy::fixed;
            c.norm.fixed_alpha = parse_double(value);
        }
    } else if (key == "mask.enabled") {
        c.mask_enabled = parse_bool(value);
    } else if (key == "mask.source_level") {
        c.mask_source_level = parse_int(value);
    } else if (key == "mask.gamma") {
        c.mask_gamma = parse_double(value);
    } else if (key == "color") {
        if (value == "luma") c.color_mode = ColorMode::luma_only;
        else if (value == "rgb") c.color_mode = ColorMode::per_channel_rgb;
        else throw std::invalid_argument("unknown color mode '" + value + "'");
    } else if (key.rfind("curve.", 0) == 0) {
        const size_t dot = key.find('.', 6);
        if (dot == std::string::npos) throw std::invalid_argument("bad curve key '" + key + "'");
        CurveSpec& s = c.curves.at(layer_index(c, key.substr(6, dot - 6)));
        const std::string field = key.substr(dot + 1);
        if (field == "family") s.family = parse_family(value);
        else if (field == "a") s.a = parse_double(value);
        else if (field == "width") s.width = parse_double(value);
        else if (field == "gamma") s.gamma = parse_double(value);
        else if (field == "beta") s.beta = parse_double(value);
        else throw std::invalid_argument("unknown curve field '" + field + "'");
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

EnhanceConfig parse_config_text(const std::string& text) {
    EnhanceConfig c = resolve_preset("identity");

    // Two passes so "levels" takes effect before any curve.* key, wherever it
    // appears in the file.
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    for (const auto& [key, value] : entries)
        if (key == "levels") apply_override(c, key, value);
    for (const auto& [key, value] : entries)
        if (key != "levels") apply_override(c, key, value);
    return c;
}

EnhanceConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace multilap
