#pragma once

#include <iosfwd>
#include <vector>

#include "multilap/pipeline.hpp"

namespace multilap {

struct BenchmarkRow {
    int window_side = 0;
    double megapixels = 0.0;
    double seconds = 0.0;
    double mp_per_sec = 0.0;
};

// Times enhance() on synthetic noise planes over a window-size x image-size
// grid. Image generation and I/O sit outside the timed region; each cell
// reports the best of `reps` runs.
std::vector<BenchmarkRow> run_benchmark(const std::vector<double>& megapixels,
                                        const std::vector<int>& window_sides,
                                        const EnhanceConfig& base_config, int threads,
                                        int reps = 2);

void print_benchmark_table(std::ostream& out, const std::vector<BenchmarkRow>& rows);

}  // namespace multilap
