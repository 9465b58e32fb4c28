#include "fastrcs/lts.hpp"

#include "fastrcs/simgen.hpp"
#include "parallel.hpp"

#include <limits>
#include <numeric>

namespace fastrcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector squared_residuals_of(const OlsFit& fit, const Dataset& data)
{
    return squared_residuals(Hyperplane::from_coefficients(fit.coefficients), data);
}

} // namespace

void LtsConfig::validate() const
{
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw std::invalid_argument("LtsConfig: alpha must lie in [0.5, 1)");
    if (num_starts < 0)
        throw std::invalid_argument("LtsConfig: num_starts must be positive (or 0 for automatic)");
    if (num_csteps_short < 0 || num_finalists < 1 || max_csteps < 1)
        throw std::invalid_argument("LtsConfig: invalid concentration-step settings");
    if (!(reweight_cutoff > 0.0) || !(exact_fit_tol >= 0.0))
        throw std::invalid_argument("LtsConfig: invalid cutoff or tolerance");
}

double subset_rss(const IndexSet& subset, const Dataset& data)
{
    const OlsFit fit = ols_fit_rows(data.x, data.y, subset);
    const Vector r2 = squared_residuals_of(fit, data);
    double rss = 0.0;
    for (int i : subset)
        rss += r2(i);
    return rss;
}

CStepResult c_step(const IndexSet& current, const Dataset& data)
{
    const int h = static_cast<int>(current.size());
    OlsFit fit;
    try {
        fit = ols_fit_rows(data.x, data.y, current);
    } catch (const SingularError&) {
        return {current, kInf, true};
    }
    const Vector r2 = squared_residuals_of(fit, data);
    CStepResult out;
    out.subset = h_smallest(r2, h);
    out.trimmed_ss = sum_of_h_smallest(r2, h);
    out.converged = out.subset == current;
    return out;
}

LtsResult fastlts(const Dataset& data, const LtsConfig& cfg)
{
    cfg.validate();
    const Index n = data.n();
    const int p = static_cast<int>(data.p());
    const int h = subset_size_h(n, p, cfg.alpha);
    const int starts = cfg.num_starts > 0 ? cfg.num_starts : mp_starts(p, cfg.alpha);
    const double tol = residual_tolerance(data, cfg.exact_fit_tol);
    IndexSet everyone(static_cast<std::size_t>(n));
    std::iota(everyone.begin(), everyone.end(), 0);

    struct Candidate {
        IndexSet subset;
        double objective = kInf;
        bool valid = false;
    };

    // Random elemental starts followed by a few concentration steps.
    std::vector<Candidate> candidates(static_cast<std::size_t>(starts));
    detail::parallel_for(starts, cfg.workers, [&](int m) {
        Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(m));
        for (int attempt = 0; attempt < 100; ++attempt) {
            const IndexSet start = sample_without_replacement(everyone, static_cast<std::size_t>(p + 1), rng);
            OlsFit fit;
            try {
                fit = ols_fit_rows(data.x, data.y, start);
            } catch (const SingularError&) {
                continue;
            }
            const Vector r2 = squared_residuals_of(fit, data);
            CStepResult step{h_smallest(r2, h), sum_of_h_smallest(r2, h), false};
            for (int s = 0; s < cfg.num_csteps_short && !step.converged; ++s)
                step = c_step(step.subset, data);
            Candidate& c = candidates[static_cast<std::size_t>(m)];
            c.subset = std::move(step.subset);
            c.objective = step.trimmed_ss;
            c.valid = true;
            return;
        }
    });

    std::vector<std::size_t> order;
    for (std::size_t m = 0; m < candidates.size(); ++m)
        if (candidates[m].valid)
            order.push_back(m);
    const int skipped = starts - static_cast<int>(order.size());
    if (order.empty())
        throw DegenerateDataError("fastlts: every starting subset was degenerate");
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return candidates[a].objective < candidates[b].objective;
    });

    std::vector<IndexSet> finalists;
    for (std::size_t m : order) {
        if (static_cast<int>(finalists.size()) >= cfg.num_finalists)
            break;
        if (std::find(finalists.begin(), finalists.end(), candidates[m].subset) == finalists.end())
            finalists.push_back(candidates[m].subset);
    }

    std::vector<Candidate> refined(finalists.size());
    detail::parallel_for(static_cast<int>(finalists.size()), cfg.workers, [&](int f) {
        CStepResult step{finalists[static_cast<std::size_t>(f)], kInf, false};
        for (int s = 0; s < cfg.max_csteps && !step.converged; ++s)
            step = c_step(step.subset, data);
        Candidate& c = refined[static_cast<std::size_t>(f)];
        try {
            c.objective = subset_rss(step.subset, data);
            c.valid = true;
        } catch (const SingularError&) {
        }
        c.subset = std::move(step.subset);
    });

    const Candidate* best = nullptr;
    for (const Candidate& c : refined)
        if (c.valid && (!best || c.objective < best->objective))
            best = &c;
    if (!best)
        throw DegenerateDataError("fastlts: every finalist has a singular design");

    LtsResult out;
    RcsResult& res = out.fit;
    out.trimmed_ss = best->objective;
    res.h = h;
    res.h_star = best->subset;
    res.skipped_candidates = skipped;
    res.exact_fit = best->objective <= static_cast<double>(h) * tol * tol;
    const OlsFit raw = ols_fit_rows(data.x, data.y, res.h_star);
    res.raw_fit = {raw.coefficients, res.exact_fit ? 0.0 : raw.sigma2};

    ReweightResult rw = reweight(res.raw_fit, data, cfg.reweight_cutoff, tol);
    res.final_fit = rw.fit;
    res.reweight_fallback = rw.fallback;
    if (res.exact_fit)
        res.final_fit.sigma2 = 0.0;
    res.report = outlyingness_report(res.final_fit, data, h, cfg.reweight_cutoff, tol);
    return out;
}

} // namespace fastrcs
