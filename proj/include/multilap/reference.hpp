#pragma once

#include <iosfwd>
#include <vector>

#include "multilap/image.hpp"
#include "multilap/kernel.hpp"
#include "multilap/normfilter.hpp"

namespace multilap {
namespace reference {

// Brute-force dense oracles on tiny images. Everything here is O(n^2) or
// worse on purpose: a second, independent route for validating the windowed
// implementation. Guarded to n <= 4096 pixels.

constexpr int kMaxPixels = 4096;

// Dense affinity model built by a plain double loop over all pixel pairs,
// deliberately sharing no code with the windowed builder.
struct DenseModel {
    int n = 0;
    std::vector<double> k;  // n*n affinities, zero outside windows
    std::vector<double> degree;
    std::vector<int> valid_count;

    double at(int i, int j) const { return k[static_cast<size_t>(i) * n + j]; }
};

struct DenseFilter {
    int n = 0;
    bool exact = true;
    std::vector<double> w;  // n*n, rows sum to 1 in both variants

    double at(int i, int j) const { return w[static_cast<size_t>(i) * n + j]; }
};

DenseModel dense_affinity(const ImagePlane& y, const KernelParams& params);

DenseFilter dense_assemble(const ImagePlane& y, const KernelParams& params, NormKind mode,
                           double alpha = 0.0);

ImagePlane apply_dense(const DenseFilter& f, const ImagePlane& y);

struct FrobeniusScan {
    double alpha_star = 0.0;
    std::vector<double> alphas;
    std::vector<double> j_values;
};

// J(alpha) = |W - W_hat(alpha)|_F^2 evaluated on a uniform grid.
FrobeniusScan frobenius_scan(const ImagePlane& y, const KernelParams& params, double alpha_min,
                             double alpha_max, int steps);

// W^k y by repeated dense application (the slow multiscale baseline).
ImagePlane diffusion_power(const ImagePlane& y, const KernelParams& params, int k);

// Runs the oracle cross-checks on built-in tiny fixtures, printing one line
// per check. Returns true when every check passes.
bool run_verification(std::ostream& out);

}  // namespace reference
}  // namespace multilap
