#pragma once

#include <vector>

#include "multilap/image.hpp"
#include "multilap/weights.hpp"

namespace multilap {

enum class NormKind { exact, norm_free };
enum class AlphaStrategy { closed_form, trace_ratio, inverse_mean_degree, fixed };

struct NormMode {
    NormKind mode = NormKind::norm_free;
    AlphaStrategy alpha_strategy = AlphaStrategy::inverse_mean_degree;
    double fixed_alpha = 0.0;  // required > 0 when strategy == fixed

    void validate() const;
    bool operator==(const NormMode&) const = default;
};

struct AlphaEstimate {
    double alpha = 0.0;
    // Closed-form denominator vanished (K == D up to tolerance); fell back to 1/d_bar.
    bool degenerate = false;
};

// Row-normalized filter: z_i = (sum_j k_ij y_j) / d_i. Convex combination of
// the inputs, so the output stays inside [min(y), max(y)].
ImagePlane apply_exact(const WeightField& w, const ImagePlane& y, int threads = 1);

// Normalization-free filter: z_i = y_i + alpha (sum_j k_ij y_j - d_i y_i).
// Constants are fixed points for every alpha; the output may overshoot the
// input range and is not clamped here.
ImagePlane apply_norm_free(const WeightField& w, const ImagePlane& y, double alpha,
                           int threads = 1);

AlphaEstimate estimate_alpha(const WeightField& w, const NormMode& mode);
AlphaEstimate estimate_alpha(const WeightField& w, AlphaStrategy strategy,
                             double fixed_alpha = 0.0);

struct VarianceFactors {
    std::vector<double> nu;             // sum of squared exact weights per row
    std::vector<double> nu_hat;         // sum of squared norm-free weights per row
    std::vector<double> rho;            // alpha * d_i
    std::vector<double> nu_hat_approx;  // rho^2 nu + (rho - 1)^2
};

VarianceFactors variance_factors(const WeightField& w, double alpha);

namespace detail {
// a_i = sum_j k_ij y_j for pixel rows [row0, row1); weights indexed from row0.
void accumulate_rows(const double* weights, int row0, int row1, int width, int height,
                     int window_radius, const ImagePlane& y, double* out, int threads);

// sum over rows of (sum_o k_io^2) / d_i and of sum_o k_io^2; used by the
// closed-form alpha (tr(K D^-1 K) and tr(K^2) via symmetry of K).
void row_square_sums(const WeightField& w, double& sum_sq, double& sum_sq_over_d);

// Strategy dispatch on precomputed trace sums. tr_k2/tr_kdinvk are only
// consulted for the closed form.
AlphaEstimate alpha_from_stats(AlphaStrategy strategy, double fixed_alpha, double n, double s1,
                               double s2, double tr_k2, double tr_kdinvk);
}  // namespace detail

}  // namespace multilap
