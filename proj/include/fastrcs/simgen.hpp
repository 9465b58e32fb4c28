#pragma once

#include "fastrcs/dataset.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace fastrcs {

enum class Contamination { Shift, PointMass };

std::string_view to_string(Contamination c);
Contamination parse_contamination(std::string_view name);

/// Adversarial contamination of a clean N(0, I) design with theta = 0, sigma = 1.
struct ContaminationConfig {
    int p = 4;
    int n = 0;            ///< 0 selects 25 p
    double epsilon = 0.1; ///< share of outliers, in [0, 0.5)
    Contamination configuration = Contamination::Shift;
    double d_x = 2.0;     ///< design-space separation, in units of sqrt(chi2_{0.95, p-1})
    double nu = 1.0;      ///< vertical separation, in units of the prediction half-width
    double alpha = 0.5;
    std::uint64_t seed = 0;

    int sample_size() const { return n > 0 ? n : 25 * p; }
    int num_outliers() const;
    void validate() const;
};

struct GeneratedSample {
    Dataset data;
    IndexSet outliers;
    Vector true_theta;
    double sigma2 = 1.0;
};

GeneratedSample generate(const ContaminationConfig& cfg);

/// Half-width of the asymptotic least-squares prediction interval at `x`
/// for the clean model (identity design covariance).
double leverage_width(const Vector& x, Index n, double sigma = 1.0);

/// Number of random (p+1)-subsets needed so that at least one is clean with
/// probability `confidence`, at contamination 4 (1 - alpha) / 5.
int mp_starts(int p, double alpha, double confidence = 0.99);

} // namespace fastrcs
