#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "multilap/config.hpp"
#include "multilap/image_io.hpp"
#include "support/test_support.hpp"

using namespace multilap;
using namespace testsupport;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "multilap_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("presets serialize to the golden snapshots") {
    for (const char* name : {"sharpen", "smooth", "denoise_sharpen", "identity"}) {
        const std::string got = serialize_config(resolve_preset(name));
        const std::string want = read_file(std::string(GOLDEN_DIR) + "/" + name + ".cfg");
        CHECK(got == want);
    }
}

TEST_CASE("serialize/parse round trip is exact") {
    for (const Preset& p : preset_registry()) {
        const EnhanceConfig back = parse_config_text(serialize_config(p.config));
        CHECK(back == p.config);
    }
    // A config exercising every field class.
    EnhanceConfig cfg = resolve_preset("sharpen");
    apply_override(cfg, "levels", "3");
    apply_override(cfg, "curve.band2.family", "s_curve");
    apply_override(cfg, "curve.band2.a", "33");
    apply_override(cfg, "curve.band2.width", "0.5");
    apply_override(cfg, "curve.base.family", "gamma_s_curve");
    apply_override(cfg, "curve.base.gamma", "0.31");
    apply_override(cfg, "kernel.kind", "bilateral");
    apply_override(cfg, "kernel.spatial", "on");
    apply_override(cfg, "kernel.hx", "3.5");
    apply_override(cfg, "norm.alpha", "0.0625");
    apply_override(cfg, "mask.gamma", "1.75");
    apply_override(cfg, "color", "rgb");
    cfg.validate();
    CHECK(parse_config_text(serialize_config(cfg)) == cfg);
}

TEST_CASE("randomized configs survive the round trip") {
    auto rng = make_rng(62);
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        EnhanceConfig cfg = resolve_preset("identity");
        apply_override(cfg, "levels", std::to_string(1 + pick(rng) % 4));
        apply_override(cfg, "kernel.kind", pick(rng) % 2 ? "nlm" : "bilateral");
        apply_override(cfg, "kernel.window", std::to_string(1 + pick(rng)));
        apply_override(cfg, "kernel.patch", std::to_string(pick(rng)));
        apply_override(cfg, "kernel.h", format_double(0.05 + uni(rng)));
        if (pick(rng) == 0) {
            apply_override(cfg, "kernel.spatial", "on");
            apply_override(cfg, "kernel.hx", format_double(0.5 + 8.0 * uni(rng)));
        }
        apply_override(cfg, "norm.mode", pick(rng) % 2 ? "exact" : "fast");
        switch (pick(rng)) {
            case 0: apply_override(cfg, "norm.alpha", "closed"); break;
            case 1: apply_override(cfg, "norm.alpha", "trace"); break;
            case 2: apply_override(cfg, "norm.alpha", format_double(0.01 + uni(rng))); break;
            default: apply_override(cfg, "norm.alpha", "invmean"); break;
        }
        apply_override(cfg, "mask.enabled", pick(rng) % 2 ? "on" : "off");
        apply_override(cfg, "mask.source_level", "1");
        apply_override(cfg, "mask.gamma", format_double(0.5 + uni(rng)));
        apply_override(cfg, "color", pick(rng) % 2 ? "luma" : "rgb");
        for (int l = 0; l <= cfg.levels; ++l) {
            const std::string layer =
                l == 0 ? "base" : (l == cfg.levels ? "high" : "band" + std::to_string(l));
            const char* families[] = {"identity", "linear_gain", "s_curve", "inverse_s_curve",
                                      "gamma_s_curve"};
            int f = pick(rng);
            if (l != 0 && f == 4) f = 2;  // gamma curves are base-layer only
            apply_override(cfg, "curve." + layer + ".family", families[f]);
            if (f == 1) apply_override(cfg, "curve." + layer + ".beta", format_double(2 * uni(rng)));
            if (f >= 2) {
                apply_override(cfg, "curve." + layer + ".a", format_double(1.0 + 60.0 * uni(rng)));
                apply_override(cfg, "curve." + layer + ".width",
                               format_double(0.05 + 0.95 * uni(rng)));
            }
            if (f == 4)
                apply_override(cfg, "curve." + layer + ".gamma", format_double(0.2 + uni(rng)));
        }
        cfg.validate();
        const EnhanceConfig back = parse_config_text(serialize_config(cfg));
        CHECK(back == cfg);
    }
}

TEST_CASE("parser throws cleanly on junk lines") {
    auto rng = make_rng(63);
    std::uniform_int_distribution<int> ch(32, 126);
    std::uniform_int_distribution<int> len(0, 40);
    for (int trial = 0; trial < 300; ++trial) {
        std::string line;
        const int L = len(rng);
        for (int i = 0; i < L; ++i) line.push_back(static_cast<char>(ch(rng)));
        try {
            (void)parse_config_text(line + "\n");
        } catch (const std::exception&) {
            // rejected is fine; crashing is not
        }
    }
}

TEST_CASE("parser accepts comments and blank lines, rejects junk") {
    const EnhanceConfig cfg = parse_config_text(
        "# comment\n"
        "\n"
        "kernel.h = 0.5   # trailing comment\n"
        "levels = 3\n"
        "curve.band2.family = s_curve\n");
    CHECK(cfg.kernel.h_y == 0.5);
    CHECK(cfg.levels == 3);
    CHECK(cfg.curves.size() == 4);
    CHECK(cfg.curves[2].family == CurveFamily::s_curve);

    CHECK_THROWS_AS(parse_config_text("no equals sign\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("bogus.key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("kernel.h = fast\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("curve.band9.a = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("mask.enabled = maybe\n"), std::invalid_argument);
}

TEST_CASE("levels override preserves base and high curves") {
    EnhanceConfig cfg = resolve_preset("sharpen");
    const CurveSpec base = cfg.curves.front();
    const CurveSpec high = cfg.curves.back();
    apply_override(cfg, "levels", "4");
    CHECK(cfg.levels == 4);
    CHECK(cfg.curves.size() == 5);
    CHECK(cfg.curves.front() == base);
    CHECK(cfg.curves.back() == high);
    CHECK(cfg.curves[2].family == CurveFamily::identity);  // new bands are identity
    CHECK(cfg.curves[3].family == CurveFamily::identity);
    cfg.validate();

    apply_override(cfg, "levels", "1");
    CHECK(cfg.curves.size() == 2);
    CHECK(cfg.curves.front() == base);
    CHECK(cfg.curves.back() == high);
    cfg.validate();
}

TEST_CASE("format_double prints the shortest exact form") {
    CHECK(format_double(0.7) == "0.7");
    CHECK(format_double(0.66) == "0.66");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    for (double v : {0.1, 2.5e-8, 123456.789, 1e300}) {
        double back = 0.0;
        sscanf(format_double(v).c_str(), "%lf", &back);
        CHECK(back == v);
    }
}

TEST_CASE("png round trip is byte exact") {
    auto rng = make_rng(60);
    const auto dir = temp_dir();

    SUBCASE("grayscale") {
        const ImagePlane img = random_plane(rng, 17, 9);
        const std::string path = (dir / "gray.png").string();
        save_gray(path, img);
        const LoadedImage back = load_image(path);
        REQUIRE(back.channels == 1);
        REQUIRE(back.gray.width == 17);
        REQUIRE(back.gray.height == 9);
        for (int i = 0; i < img.pixels(); ++i)
            CHECK(to_byte(back.gray.v[i]) == to_byte(img.v[i]));
    }
    SUBCASE("rgb") {
        const RgbImage img = random_rgb(rng, 8, 11);
        const std::string path = (dir / "color.png").string();
        save_rgb(path, img);
        const LoadedImage back = load_image(path);
        REQUIRE(back.channels == 3);
        for (int i = 0; i < 88; ++i) {
            CHECK(to_byte(back.rgb.r.v[i]) == to_byte(img.r.v[i]));
            CHECK(to_byte(back.rgb.g.v[i]) == to_byte(img.g.v[i]));
            CHECK(to_byte(back.rgb.b.v[i]) == to_byte(img.b.v[i]));
        }
    }
}

TEST_CASE("png loader converts rgba, palette, 16-bit and gray+alpha inputs") {
    struct Variant {
        const char* file;
        int channels;
    };
    for (const Variant v : {Variant{"rgba.png", 3}, Variant{"palette.png", 3},
                            Variant{"gray16.png", 1}, Variant{"gray_alpha.png", 1}}) {
        const LoadedImage img = load_image(std::string(TEST_DATA_DIR) + "/" + v.file);
        CHECK(img.channels == v.channels);
        CHECK(img.width() == 13);
        CHECK(img.height() == 9);
        const ImagePlane& probe = v.channels == 1 ? img.gray : img.rgb.g;
        for (double s : probe.v) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
}

TEST_CASE("pnm round trip and header handling") {
    auto rng = make_rng(61);
    const auto dir = temp_dir();

    const ImagePlane gray = random_plane(rng, 6, 7);
    const std::string pgm = (dir / "img.pgm").string();
    save_gray(pgm, gray);
    const LoadedImage back = load_image(pgm);
    REQUIRE(back.channels == 1);
    for (int i = 0; i < gray.pixels(); ++i) CHECK(to_byte(back.gray.v[i]) == to_byte(gray.v[i]));

    const RgbImage rgb = random_rgb(rng, 5, 3);
    const std::string ppm = (dir / "img.ppm").string();
    save_rgb(ppm, rgb);
    const LoadedImage crgb = load_image(ppm);
    REQUIRE(crgb.channels == 3);
    for (int i = 0; i < 15; ++i) CHECK(to_byte(crgb.rgb.g.v[i]) == to_byte(rgb.g.v[i]));

    // Comment lines in the header are legal.
    {
        std::ofstream out((dir / "hdr.pgm").string(), std::ios::binary);
        out << "P5\n# a comment\n2 2\n255\n";
        const char data[] = {0, 64, (char)128, (char)255};
        out.write(data, 4);
    }
    const LoadedImage hdr = load_image((dir / "hdr.pgm").string());
    CHECK(hdr.gray.v[3] == 1.0);

    CHECK_THROWS_AS(load_image((dir / "missing.png").string()), std::runtime_error);
    CHECK_THROWS_AS(load_image("unsupported.tiff"), std::runtime_error);
    CHECK_THROWS_AS(save_rgb((dir / "bad.pgm").string(), rgb), std::runtime_error);
}
