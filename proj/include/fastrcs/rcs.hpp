#pragma once

#include "fastrcs/dataset.hpp"
#include "fastrcs/random.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fastrcs {

/// Raised when every candidate subset had to be skipped (degenerate data).
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RcsConfig {
    double alpha = 0.5;           ///< assumed uncontaminated share, in [0.5, 1)
    int k = 25;                   ///< hyperplanes per subset
    int l_stages = 3;             ///< growing stages
    int num_starts = 0;           ///< starting (p+1)-subsets; 0 selects mp_starts(p, alpha)
    std::uint64_t seed = 1;
    double reweight_cutoff = 2.5;
    double exact_fit_tol = 1e-12; ///< relative to 1 + max|y|
    int workers = 1;              ///< threads used to evaluate candidates

    void validate() const;
};

struct CoefficientFit {
    Vector theta;       ///< intercept first
    double sigma2 = 0.0;
};

struct OutlyingnessReport {
    Vector standardized_residuals; ///< r_i / sigma_hat; +inf off an exact fit
    IndexSet h_plus;               ///< h smallest residuals of the final fit
    IndexSet good_set;             ///< standardized residual <= cutoff
    std::vector<bool> flags;       ///< true = outlier

    std::size_t num_flagged() const;
};

struct RcsResult {
    int h = 0;
    IndexSet h_star;
    CoefficientFit raw_fit;
    CoefficientFit final_fit;
    /// Selection criterion of the winning subset; empty for non-RCS estimators.
    std::optional<double> i_index_of_best;
    bool exact_fit = false;
    /// Re-weighting kept fewer than p rows, so the final fit is the raw fit.
    bool reweight_fallback = false;
    int skipped_candidates = 0;
    OutlyingnessReport report;
};

/// Absolute residual tolerance used for exact-fit decisions on `data`.
double residual_tolerance(const Dataset& data, double exact_fit_tol);

/// log of mean r^2 over `subset` divided by mean r^2 over the h best-fitting
/// observations of `plane`. 0 when both means vanish, +inf when only the
/// denominator does. `tol` is an absolute residual tolerance.
double incongruence(const IndexSet& subset, const Hyperplane& plane, const Dataset& data, int h,
                    double tol);

/// Hyperplane through p distinct members of `subset`, resampling degenerate
/// draws at most `max_attempts` times.
std::optional<Hyperplane> draw_hyperplane(const IndexSet& subset, const Dataset& data, Rng& rng,
                                          int max_attempts = 100);

/// I-index of `subset`: mean incongruence over `k` random hyperplanes
/// through members of the subset. Empty when hyperplanes cannot be drawn.
std::optional<double> i_index(const IndexSet& subset, const Dataset& data, int h, int k, Rng& rng,
                              double tol);

/// I-index averaged over every hyperplane through p members of `subset`.
/// Degenerate p-tuples are left out of the average.
double i_index_exhaustive(const IndexSet& subset, const Dataset& data, int h, double tol);

/// Subset sizes reached after each growing stage; the last entry is h.
std::vector<int> growth_schedule(int p, int h, int stages);

struct GrownSubset {
    IndexSet subset;
    bool exact_fit = false;
    std::optional<Hyperplane> exact_plane;
};

/// Grows a (p+1)-subset to size h in `stages` steps, ranking every
/// observation by its residual normalized by the current subset's mean
/// residual, averaged over `k` hyperplanes drawn from the current subset.
/// Empty when hyperplanes cannot be drawn from the subset.
std::optional<GrownSubset> grow_subset(const IndexSet& start, const Dataset& data, int h, int k,
                                       int stages, Rng& rng, double tol);

struct ReweightResult {
    CoefficientFit fit;
    IndexSet kept;
    bool fallback = false;
};

/// One-step re-weighting: refit by least squares on the observations whose
/// raw residual, scaled by median(r) / Phi^{-1}(0.75), is within `cutoff`.
ReweightResult reweight(const CoefficientFit& raw, const Dataset& data, double cutoff, double tol);

OutlyingnessReport outlyingness_report(const CoefficientFit& fit, const Dataset& data, int h,
                                       double cutoff, double tol);

/// FastRCS estimator.
RcsResult fastrcs(const Dataset& data, const RcsConfig& cfg = {});

} // namespace fastrcs
