#include "multilap/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace multilap {

namespace {

ImagePlane synthetic_noise(double megapixels) {
    const int side = static_cast<int>(std::lround(std::sqrt(megapixels * 1e6)));
    ImagePlane img(side, side);
    std::mt19937 rng(20259);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    // Smooth ramp plus noise: degrees and the mask get realistic variation.
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            img.at(x, y) = clamp01(0.5 + 0.3 * std::sin(x * 0.013) * std::cos(y * 0.017) +
                                   0.15 * (uni(rng) - 0.5));
    return img;
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const std::vector<double>& megapixels,
                                        const std::vector<int>& window_sides,
                                        const EnhanceConfig& base_config, int threads, int reps) {
    if (reps < 1) reps = 1;
    std::vector<BenchmarkRow> rows;
    for (double mp : megapixels) {
        const ImagePlane img = synthetic_noise(mp);
        const double actual_mp = img.pixels() / 1e6;
        for (int side : window_sides) {
            if (side < 3 || side % 2 == 0) throw std::invalid_argument("window side must be odd >= 3");
            EnhanceConfig cfg = base_config;
            cfg.kernel.window_radius = (side - 1) / 2;
            double best = 0.0;
            for (int rep = 0; rep < reps; ++rep) {
                const auto t0 = std::chrono::steady_clock::now();
                const ImagePlane out = enhance(img, cfg, threads);
                const auto t1 = std::chrono::steady_clock::now();
                const double sec = std::chrono::duration<double>(t1 - t0).count();
                if (rep == 0 || sec < best) best = sec;
                (void)out;
            }
            rows.push_back({side, actual_mp, best, actual_mp / best});
        }
    }
    return rows;
}

void print_benchmark_table(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "window   size(MP)   seconds      MP/s\n";
    char buf[128];
    for (const BenchmarkRow& r : rows) {
        snprintf(buf, sizeof(buf), "%dx%-5d %8.2f %9.3f %9.2f\n", r.window_side, r.window_side,
                 r.megapixels, r.seconds, r.mp_per_sec);
        out << buf;
    }
}

}  // namespace multilap
