#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "multilap/benchmark.hpp"
#include "multilap/config.hpp"
#include "multilap/image_io.hpp"
#include "multilap/parallel.hpp"
#include "multilap/pipeline.hpp"
#include "multilap/reference.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

const char* kUsage = R"(usage: enhance [options] INPUT OUTPUT
       enhance --benchmark [options]
       enhance --verify

Edge-aware multi-scale image enhancement: smoothing, sharpening and detail/tone
manipulation driven by windowed affinity filters.

Exactly one of --preset or --config selects the configuration of an
enhancement run. Supported formats: .png, .ppm, .pgm (8-bit).

options:
  --preset NAME         smooth | sharpen | denoise-sharpen | identity
  --config PATH         key = value configuration file
  --set KEY=VALUE       override any config key (repeatable)
  --color MODE          luma | rgb
  --window R            window radius (window is (2R+1)x(2R+1))
  --patch Q             patch radius (NLM)
  --h H                 photometric smoothing parameter h_1
  --levels K            decomposition level count
  --norm MODE           exact | fast (normalization-free)
  --alpha S             closed | trace | invmean | FLOAT (fixed)
  --mask MODE           on | off
  --dump-layers DIR     write base/band/high layers (signed layers offset 0.5)
  --dump-mask PATH      write the structure mask as 8-bit grayscale
  --dump-degrees PATH   write per-pixel degree ratio d_i/p_i
  --benchmark           time the kernel-size x image-size grid, no input needed
  --bench-mp LIST       benchmark image sizes in MP (default 0.4,1,3,12)
  --bench-windows LIST  benchmark window sides (default 3,5,7,9)
  --verify              run the dense-oracle self checks and exit
  --threads N           worker threads (default: hardware)
  --help                this text
)";

struct Options {
    std::string input, output;
    std::string preset, config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string dump_layers, dump_mask, dump_degrees;
    bool benchmark = false;
    bool verify = false;
    int threads = 0;
    std::vector<double> bench_mp = {0.4, 1.0, 3.0, 12.0};
    std::vector<int> bench_windows = {3, 5, 7, 9};
};

class UsageError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        parts.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

Options parse_argv(int argc, char** argv) {
    Options opt;
    auto value = [&](int& i, const char* flag) -> std::string {
        if (i + 1 >= argc) throw UsageError(std::string(flag) + " needs a value");
        return argv[++i];
    };
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--help" || arg == "-h") {
            std::cout << kUsage;
            std::exit(kExitOk);
        } else if (arg == "--preset") {
            opt.preset = value(i, "--preset");
        } else if (arg == "--config") {
            opt.config_path = value(i, "--config");
        } else if (arg == "--set") {
            const std::string kv = value(i, "--set");
            const size_t eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects KEY=VALUE");
            opt.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        } else if (arg == "--color") {
            opt.overrides.emplace_back("color", value(i, "--color"));
        } else if (arg == "--window") {
            opt.overrides.emplace_back("kernel.window", value(i, "--window"));
        } else if (arg == "--patch") {
            opt.overrides.emplace_back("kernel.patch", value(i, "--patch"));
        } else if (arg == "--h") {
            opt.overrides.emplace_back("kernel.h", value(i, "--h"));
        } else if (arg == "--levels") {
            opt.overrides.emplace_back("levels", value(i, "--levels"));
        } else if (arg == "--norm") {
            opt.overrides.emplace_back("norm.mode", value(i, "--norm"));
        } else if (arg == "--alpha") {
            opt.overrides.emplace_back("norm.alpha", value(i, "--alpha"));
        } else if (arg == "--mask") {
            opt.overrides.emplace_back("mask.enabled", value(i, "--mask"));
        } else if (arg == "--dump-layers") {
            opt.dump_layers = value(i, "--dump-layers");
        } else if (arg == "--dump-mask") {
            opt.dump_mask = value(i, "--dump-mask");
        } else if (arg == "--dump-degrees") {
            opt.dump_degrees = value(i, "--dump-degrees");
        } else if (arg == "--benchmark") {
            opt.benchmark = true;
        } else if (arg == "--bench-mp") {
            opt.bench_mp.clear();
            for (const std::string& p : split_list(value(i, "--bench-mp")))
                opt.bench_mp.push_back(std::stod(p));
        } else if (arg == "--bench-windows") {
            opt.bench_windows.clear();
            for (const std::string& p : split_list(value(i, "--bench-windows")))
                opt.bench_windows.push_back(std::stoi(p));
        } else if (arg == "--verify") {
            opt.verify = true;
        } else if (arg == "--threads") {
            opt.threads = std::stoi(value(i, "--threads"));
        } else if (!arg.empty() && arg[0] == '-') {
            throw UsageError("unknown flag: " + arg);
        } else if (opt.input.empty()) {
            opt.input = arg;
        } else if (opt.output.empty()) {
            opt.output = arg;
        } else {
            throw UsageError("unexpected argument: " + arg);
        }
    }
    return opt;
}

multilap::EnhanceConfig resolve_config(const Options& opt) {
    using multilap::EnhanceConfig;
    if (!opt.preset.empty() && !opt.config_path.empty())
        throw UsageError("--preset and --config are mutually exclusive");
    if (opt.preset.empty() && opt.config_path.empty())
        throw UsageError("one of --preset or --config is required");
    EnhanceConfig cfg = opt.preset.empty() ? multilap::parse_config_file(opt.config_path)
                                           : multilap::resolve_preset(opt.preset);
    for (const auto& [key, val] : opt.overrides) multilap::apply_override(cfg, key, val);
    cfg.validate();
    return cfg;
}

void write_dumps(const Options& opt, const multilap::ImagePlane& plane,
                 const multilap::EnhanceConfig& cfg, int threads) {
    namespace fs = std::filesystem;
    using multilap::ImagePlane;
    const multilap::PlaneDiagnostics diag = multilap::enhance_diagnostics(plane, cfg, threads);

    if (!opt.dump_layers.empty()) {
        fs::create_directories(opt.dump_layers);
        auto shifted = [](const ImagePlane& p) {
            ImagePlane out(p.width, p.height);
            for (int i = 0; i < p.pixels(); ++i) out.v[i] = p.v[i] + 0.5;
            return out;
        };
        const fs::path dir(opt.dump_layers);
        multilap::save_gray((dir / "base.png").string(), diag.layers.base);
        for (size_t l = 0; l < diag.layers.bands.size(); ++l)
            multilap::save_gray((dir / ("band" + std::to_string(l + 1) + ".png")).string(),
                                shifted(diag.layers.bands[l]));
        multilap::save_gray((dir / "high.png").string(), shifted(diag.layers.high));
    }
    if (!opt.dump_mask.empty()) multilap::save_gray(opt.dump_mask, diag.mask);
    if (!opt.dump_degrees.empty()) multilap::save_gray(opt.dump_degrees, diag.degree_ratio);
}

int run(int argc, char** argv) {
    const Options opt = parse_argv(argc, argv);
    const int threads = multilap::resolve_threads(opt.threads);

    if (opt.verify) {
        const bool ok = multilap::reference::run_verification(std::cout);
        return ok ? kExitOk : 1;
    }
    if (opt.benchmark) {
        multilap::EnhanceConfig cfg = opt.preset.empty() && opt.config_path.empty()
                                          ? multilap::resolve_preset("sharpen")
                                          : resolve_config(opt);
        const auto rows =
            multilap::run_benchmark(opt.bench_mp, opt.bench_windows, cfg, threads);
        multilap::print_benchmark_table(std::cout, rows);
        return kExitOk;
    }

    if (opt.input.empty() || opt.output.empty())
        throw UsageError("INPUT and OUTPUT paths are required");
    const multilap::EnhanceConfig cfg = resolve_config(opt);

    const multilap::LoadedImage img = multilap::load_image(opt.input);
    const bool want_dump =
        !opt.dump_layers.empty() || !opt.dump_mask.empty() || !opt.dump_degrees.empty();
    if (img.channels == 1) {
        multilap::save_gray(opt.output, multilap::enhance(img.gray, cfg, threads));
        if (want_dump) write_dumps(opt, img.gray, cfg, threads);
    } else {
        multilap::save_rgb(opt.output, multilap::enhance(img.rgb, cfg, threads));
        if (want_dump) write_dumps(opt, multilap::rgb_to_yuv(img.rgb).y, cfg, threads);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << kUsage;
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
