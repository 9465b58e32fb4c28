#pragma once

#include "fastrcs/rcs.hpp"

namespace fastrcs {

struct LtsConfig {
    double alpha = 0.5;
    int num_starts = 0;       ///< 0 selects mp_starts(p, alpha)
    int num_csteps_short = 2;
    int num_finalists = 10;
    int max_csteps = 100;     ///< cap on the refinement of each finalist
    std::uint64_t seed = 1;
    double reweight_cutoff = 2.5;
    double exact_fit_tol = 1e-12;
    int workers = 1;

    void validate() const;
};

struct CStepResult {
    IndexSet subset;
    double trimmed_ss = 0.0; ///< sum of the h smallest squared residuals of the refit
    bool converged = false;
};

/// Sum of squared residuals of the least-squares fit on `subset`, over `subset`.
double subset_rss(const IndexSet& subset, const Dataset& data);

/// One concentration step: least squares on `current`, then keep the h
/// observations with the smallest squared residuals. A singular fit keeps
/// `current` and reports convergence.
CStepResult c_step(const IndexSet& current, const Dataset& data);

struct LtsResult {
    RcsResult fit;           ///< same layout as the FastRCS result
    double trimmed_ss = 0.0; ///< objective of the selected subset
};

/// Least trimmed squares with random starts, short concentration runs and
/// full refinement of the best finalists.
LtsResult fastlts(const Dataset& data, const LtsConfig& cfg = {});

} // namespace fastrcs
