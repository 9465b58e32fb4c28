#include "fastrcs/rcs.hpp"

#include "fastrcs/simgen.hpp"
#include "parallel.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace fastrcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_over(const Vector& values, const IndexSet& subset)
{
    double sum = 0.0;
    for (int i : subset)
        sum += values(i);
    return sum / static_cast<double>(subset.size());
}

IndexSet all_indices(Index n)
{
    IndexSet out(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

IndexSet within_tolerance(const Vector& residuals, double tol)
{
    IndexSet out;
    for (Index i = 0; i < residuals.size(); ++i)
        if (residuals(i) <= tol)
            out.push_back(static_cast<int>(i));
    return out;
}

} // namespace

void RcsConfig::validate() const
{
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw std::invalid_argument("RcsConfig: alpha must lie in [0.5, 1)");
    if (k < 1)
        throw std::invalid_argument("RcsConfig: k must be at least 1");
    if (l_stages < 1)
        throw std::invalid_argument("RcsConfig: l_stages must be at least 1");
    if (num_starts < 0)
        throw std::invalid_argument("RcsConfig: num_starts must be positive (or 0 for automatic)");
    if (!(reweight_cutoff > 0.0))
        throw std::invalid_argument("RcsConfig: reweight_cutoff must be positive");
    if (!(exact_fit_tol >= 0.0))
        throw std::invalid_argument("RcsConfig: exact_fit_tol must be nonnegative");
}

std::size_t OutlyingnessReport::num_flagged() const
{
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

double residual_tolerance(const Dataset& data, double exact_fit_tol)
{
    return exact_fit_tol * (1.0 + data.y.cwiseAbs().maxCoeff());
}

double incongruence(const IndexSet& subset, const Hyperplane& plane, const Dataset& data, int h,
                    double tol)
{
    if (subset.empty())
        throw std::invalid_argument("incongruence: empty subset");
    const Vector r2 = squared_residuals(plane, data);
    const double numerator = mean_over(r2, subset);
    const double denominator = sum_of_h_smallest(r2, h) / h;
    const double tol2 = tol * tol;
    if (denominator <= tol2)
        return numerator <= tol2 ? 0.0 : kInf;
    const double value = std::log(numerator / denominator);
    return static_cast<Index>(subset.size()) >= h ? std::max(0.0, value) : value;
}

std::optional<Hyperplane> draw_hyperplane(const IndexSet& subset, const Dataset& data, Rng& rng,
                                          int max_attempts)
{
    const auto p = static_cast<std::size_t>(data.p());
    if (subset.size() < p)
        return std::nullopt;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (auto plane = try_exact_hyperplane(data, sample_without_replacement(subset, p, rng)))
            return plane;
    }
    return std::nullopt;
}

std::optional<double> i_index(const IndexSet& subset, const Dataset& data, int h, int k, Rng& rng,
                              double tol)
{
    double total = 0.0;
    for (int draw = 0; draw < k; ++draw) {
        auto plane = draw_hyperplane(subset, data, rng);
        if (!plane)
            return std::nullopt;
        total += incongruence(subset, *plane, data, h, tol);
    }
    return total / k;
}

double i_index_exhaustive(const IndexSet& subset, const Dataset& data, int h, double tol)
{
    const auto p = static_cast<std::size_t>(data.p());
    if (subset.size() < p)
        throw std::invalid_argument("i_index_exhaustive: subset smaller than p");

    std::vector<std::size_t> pick(p);
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<int> rows(p);
    double total = 0.0;
    long planes = 0;
    const std::size_t m = subset.size();
    for (;;) {
        for (std::size_t j = 0; j < p; ++j)
            rows[j] = subset[pick[j]];
        if (auto plane = try_exact_hyperplane(data, rows)) {
            total += incongruence(subset, *plane, data, h, tol);
            ++planes;
        }
        // Next combination in lexicographic order.
        std::size_t j = p;
        while (j > 0 && pick[j - 1] == m - p + (j - 1))
            --j;
        if (j == 0)
            break;
        ++pick[j - 1];
        for (std::size_t t = j; t < p; ++t)
            pick[t] = pick[t - 1] + 1;
    }
    if (planes == 0)
        throw SingularError("i_index_exhaustive: every p-tuple of the subset is degenerate");
    return total / static_cast<double>(planes);
}

std::vector<int> growth_schedule(int p, int h, int stages)
{
    std::vector<int> sizes;
    sizes.reserve(static_cast<std::size_t>(stages));
    const int span = h - p - 1;
    for (int l = 1; l <= stages; ++l) {
        // Integer ceil of span * l / stages.
        const int step = (span * l + stages - 1) / stages;
        sizes.push_back(p + 1 + step);
    }
    return sizes;
}

std::optional<GrownSubset> grow_subset(const IndexSet& start, const Dataset& data, int h, int k,
                                       int stages, Rng& rng, double tol)
{
    const Index n = data.n();
    const double tol2 = tol * tol;
    GrownSubset grown;
    grown.subset = start;
    std::sort(grown.subset.begin(), grown.subset.end());

    for (int target : growth_schedule(static_cast<int>(data.p()), h, stages)) {
        Vector score = Vector::Zero(n);
        for (int draw = 0; draw < k; ++draw) {
            auto plane = draw_hyperplane(grown.subset, data, rng);
            if (!plane)
                return std::nullopt;
            const Vector r = residual_distances(*plane, data);
            if ((r.array() <= tol).count() >= h) {
                grown.subset = h_smallest(r, h);
                grown.exact_fit = true;
                grown.exact_plane = std::move(plane);
                return grown;
            }
            const Vector r2 = r.cwiseAbs2();
            const double scale = mean_over(r2, grown.subset);
            if (scale <= tol2)
                score += r2.unaryExpr([tol2](double v) { return v <= tol2 ? 0.0 : kInf; });
            else
                score += r2 / scale;
        }
        grown.subset = h_smallest(score / k, target);
    }
    return grown;
}

ReweightResult reweight(const CoefficientFit& raw, const Dataset& data, double cutoff, double tol)
{
    const Vector r = residual_distances(Hyperplane::from_coefficients(raw.theta), data);
    const double scale = median(r) / normal_quantile(0.75);

    ReweightResult out;
    if (scale <= tol) {
        out.kept = within_tolerance(r, tol);
    } else {
        for (Index i = 0; i < r.size(); ++i)
            if (r(i) / scale <= cutoff)
                out.kept.push_back(static_cast<int>(i));
    }

    if (static_cast<Index>(out.kept.size()) >= data.p()) {
        try {
            const OlsFit fit = ols_fit_rows(data.x, data.y, out.kept);
            out.fit = {fit.coefficients, fit.sigma2};
            return out;
        } catch (const SingularError&) {
        }
    }
    out.fit = raw;
    out.fallback = true;
    return out;
}

OutlyingnessReport outlyingness_report(const CoefficientFit& fit, const Dataset& data, int h,
                                       double cutoff, double tol)
{
    const Vector r = residual_distances(Hyperplane::from_coefficients(fit.theta), data);
    const double sigma = std::sqrt(std::max(0.0, fit.sigma2));

    OutlyingnessReport report;
    if (sigma > 0.0)
        report.standardized_residuals = r / sigma;
    else
        report.standardized_residuals = r.unaryExpr([tol](double v) { return v <= tol ? 0.0 : kInf; });
    report.h_plus = h_smallest(r, h);
    report.flags.assign(static_cast<std::size_t>(r.size()), true);
    for (Index i = 0; i < r.size(); ++i) {
        if (report.standardized_residuals(i) <= cutoff) {
            report.good_set.push_back(static_cast<int>(i));
            report.flags[static_cast<std::size_t>(i)] = false;
        }
    }
    return report;
}

RcsResult fastrcs(const Dataset& data, const RcsConfig& cfg)
{
    cfg.validate();
    const Index n = data.n();
    const int p = static_cast<int>(data.p());
    const int h = subset_size_h(n, p, cfg.alpha);
    const int starts = cfg.num_starts > 0 ? cfg.num_starts : mp_starts(p, cfg.alpha);
    const double tol = residual_tolerance(data, cfg.exact_fit_tol);
    const IndexSet everyone = all_indices(n);

    struct Candidate {
        std::optional<GrownSubset> grown;
        std::optional<double> score;
    };
    std::vector<Candidate> candidates(static_cast<std::size_t>(starts));

    detail::parallel_for(starts, cfg.workers, [&](int m) {
        Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(m));
        const IndexSet start = sample_without_replacement(everyone, static_cast<std::size_t>(p + 1), rng);
        Candidate& c = candidates[static_cast<std::size_t>(m)];
        c.grown = grow_subset(start, data, h, cfg.k, cfg.l_stages, rng, tol);
        if (c.grown && !c.grown->exact_fit)
            c.score = i_index(c.grown->subset, data, h, cfg.k, rng, tol);
    });

    RcsResult result;
    result.h = h;
    const Candidate* best = nullptr;
    for (const Candidate& c : candidates) {
        if (c.grown && c.grown->exact_fit) {
            best = &c;
            break;
        }
    }
    if (!best) {
        for (const Candidate& c : candidates) {
            if (!c.score) {
                ++result.skipped_candidates;
                continue;
            }
            if (!best || *c.score < *best->score)
                best = &c;
        }
    } else {
        result.skipped_candidates = static_cast<int>(std::count_if(
            candidates.begin(), candidates.end(), [](const Candidate& c) { return !c.grown; }));
    }
    if (!best)
        throw DegenerateDataError("fastrcs: every candidate subset was degenerate");

    result.h_star = best->grown->subset;
    result.exact_fit = best->grown->exact_fit;
    result.i_index_of_best = result.exact_fit ? 0.0 : *best->score;

    OlsFit raw;
    try {
        raw = ols_fit_rows(data.x, data.y, result.h_star);
    } catch (const SingularError&) {
        if (!result.exact_fit)
            throw DegenerateDataError("fastrcs: the selected subset has a singular design");
        raw.coefficients = best->grown->exact_plane->coefficients();
    }
    result.raw_fit = {raw.coefficients, result.exact_fit ? 0.0 : raw.sigma2};

    ReweightResult rw = reweight(result.raw_fit, data, cfg.reweight_cutoff, tol);
    result.final_fit = rw.fit;
    result.reweight_fallback = rw.fallback;
    if (result.exact_fit)
        result.final_fit.sigma2 = 0.0;
    result.report = outlyingness_report(result.final_fit, data, h, cfg.reweight_cutoff, tol);
    return result;
}

} // namespace fastrcs
