#pragma once

#include "fastrcs/dataset.hpp"
#include "fastrcs/simgen.hpp"

#include <string>
#include <vector>

namespace fastrcs {

/// Bias of a fit under the canonical generation (theta = 0, identity design covariance).
double bias(const Vector& theta_hat);

/// Share of the true outliers that made it into `h_plus`; 0 when there are none.
double mis_rate(const IndexSet& outliers, const IndexSet& h_plus);

/// Lower-interpolated percentile: sorted[floor(q (n - 1))].
double lower_percentile(std::vector<double> values, double q);

struct CurvePoint {
    std::string algorithm;
    Contamination configuration = Contamination::Shift;
    int p = 0;
    double epsilon = 0.0;
    double d_x = 0.0;
    double alpha = 0.5;
    double nu = 0.0;
    int replication = 0;
    double bias = 0.0;
    double mis_rate = 0.0;
};

struct CurveSummary {
    std::string algorithm;
    Contamination configuration = Contamination::Shift;
    int p = 0;
    double epsilon = 0.0;
    double d_x = 0.0;
    double alpha = 0.5;
    double nu = 0.0;
    int replications = 0;
    double bias_median = 0.0;
    double bias_p75 = 0.0;
    double mis_rate_median = 0.0;
    double mis_rate_p75 = 0.0;
};

/// Median and 75th percentile of bias and misclassification per
/// (algorithm, configuration, p, epsilon, d_x, alpha, nu), in order of first appearance.
std::vector<CurveSummary> summarize(const std::vector<CurvePoint>& points);

} // namespace fastrcs
