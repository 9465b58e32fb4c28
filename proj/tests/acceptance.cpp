// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero
// when any selected criterion fails. Pass criterion numbers to run a subset.

#include "fastrcs/io.hpp"
#include "fastrcs/lts.hpp"
#include "fastrcs/metrics.hpp"
#include "fastrcs/rcs.hpp"
#include "fastrcs/simgen.hpp"
#include "fastrcs/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

using namespace fastrcs;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a = 0, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Dataset gaussian(Index n, Index p, Rng& rng)
{
    std::normal_distribution<double> g;
    Matrix x(n, p - 1);
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p - 1; ++j)
            x(i, j) = g(rng);
        y(i) = g(rng);
    }
    return Dataset(std::move(x), std::move(y));
}

IndexSet random_subset(Index n, int size, Rng& rng)
{
    IndexSet all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    IndexSet s = sample_without_replacement(all, static_cast<std::size_t>(size), rng);
    std::sort(s.begin(), s.end());
    return s;
}

// Brute-force I-index for simple regression: every line through two subset
// members, averaged log ratio of subset mean r^2 to the mean of the h smallest.
double oracle_i_index(const Dataset& d, const IndexSet& subset, int h)
{
    const Index n = d.n();
    double total = 0.0;
    int count = 0;
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b) {
            const double x1 = d.x(subset[a], 0), y1 = d.y(subset[a]);
            const double x2 = d.x(subset[b], 0), y2 = d.y(subset[b]);
            if (x1 == x2)
                continue;
            const double slope = (y2 - y1) / (x2 - x1);
            const double icept = y1 - slope * x1;
            std::vector<double> r2(static_cast<std::size_t>(n));
            for (Index i = 0; i < n; ++i) {
                const double e = d.y(i) - icept - slope * d.x(i, 0);
                r2[static_cast<std::size_t>(i)] = e * e;
            }
            double num = 0.0;
            for (int i : subset)
                num += r2[static_cast<std::size_t>(i)];
            num /= static_cast<double>(subset.size());
            std::sort(r2.begin(), r2.end());
            const double den = std::accumulate(r2.begin(), r2.begin() + h, 0.0) / h;
            total += std::log(num / den);
            ++count;
        }
    return total / count;
}

Verdict criterion_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int comparisons = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng = make_rng(1001, seed);
        const Dataset d = gaussian(12, 2, rng);
        const int h = subset_size_h(12, 2, 0.5);
        for (int rep = 0; rep < 20; ++rep) {
            const IndexSet subset = random_subset(12, h, rng);
            const double got = i_index_exhaustive(subset, d, h, 0.0);
            const double want = oracle_i_index(d, subset, h);
            worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
            ++comparisons;
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-12 && elapsed < 10.0,
            fmt("%.0f subsets over 50 datasets, max rel. diff %.2e, %.2f s", comparisons, worst, elapsed)};
}

bool same_selection(const RcsResult& a, const RcsResult& b)
{
    return a.h_star == b.h_star && a.report.h_plus == b.report.h_plus && a.report.flags == b.report.flags;
}

bool bit_identical(const RcsResult& a, const RcsResult& b)
{
    auto sameVec = [](const Vector& u, const Vector& v) {
        return u.size() == v.size() && std::equal(u.data(), u.data() + u.size(), v.data(), [](double s, double t) {
                   return s == t || (std::isnan(s) && std::isnan(t));
               });
    };
    return same_selection(a, b) && a.exact_fit == b.exact_fit && a.i_index_of_best == b.i_index_of_best &&
           sameVec(a.raw_fit.theta, b.raw_fit.theta) && a.raw_fit.sigma2 == b.raw_fit.sigma2 &&
           sameVec(a.final_fit.theta, b.final_fit.theta) && a.final_fit.sigma2 == b.final_fit.sigma2 &&
           sameVec(a.report.standardized_residuals, b.report.standardized_residuals) &&
           a.skipped_candidates == b.skipped_candidates && a.reweight_fallback == b.reweight_fallback;
}

// Contaminated sample for trial t: p in 2..4, alternating shapes and rates.
GeneratedSample trial_sample(std::uint64_t t)
{
    ContaminationConfig cc;
    cc.p = 2 + static_cast<int>(t % 3);
    cc.n = 10 * cc.p + static_cast<int>(t % 17);
    cc.epsilon = 0.1 * static_cast<double>(t % 4);
    cc.configuration = t % 2 ? Contamination::PointMass : Contamination::Shift;
    cc.d_x = t % 5 < 2 ? 2.0 : 8.0;
    cc.nu = 1.0 + static_cast<double>(t % 7);
    cc.seed = substream_seed(2002, t);
    return generate(cc);
}

Verdict criterion_properties()
{
    const auto t0 = std::chrono::steady_clock::now();
    constexpr int trials = 1000;
    int negative = 0, regression = 0, affine = 0, monotone = 0, determinism = 0;

    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(3003, t);
        std::normal_distribution<double> g;

        // i_index >= 0 on size-h subsets.
        {
            const GeneratedSample s = trial_sample(t);
            const Dataset& d = s.data;
            const int h = subset_size_h(d.n(), d.p(), 0.5);
            const auto v = i_index(random_subset(d.n(), h, rng), d, h, 25, rng,
                                   residual_tolerance(d, 1e-12));
            negative += v && *v < 0.0;
        }

        const GeneratedSample s = trial_sample(t + trials);
        const Dataset& d = s.data;
        const Index q = d.p() - 1;
        RcsConfig cfg;
        cfg.seed = t;
        const RcsResult base = fastrcs::fastrcs(d, cfg);

        // y -> c y + X gamma + k.
        {
            double c = 0.0;
            while (std::abs(c) < 0.1)
                c = 3.0 * g(rng);
            Vector gamma(q);
            for (Index j = 0; j < q; ++j)
                gamma(j) = 2.0 * g(rng);
            const double k = 5.0 * g(rng);
            const Dataset moved(d.x, c * d.y + d.x * gamma + Vector::Constant(d.n(), k));
            regression += !same_selection(base, fastrcs::fastrcs(moved, cfg));
        }

        // X -> X A' + 1 v', A well conditioned.
        {
            Matrix a = 2.0 * Matrix::Identity(q, q);
            for (Index i = 0; i < q; ++i)
                for (Index j = 0; j < q; ++j)
                    a(i, j) += 0.5 * g(rng);
            Vector v(q);
            for (Index j = 0; j < q; ++j)
                v(j) = 10.0 * g(rng);
            const Matrix x = (d.x * a.transpose()).rowwise() + v.transpose();
            affine += !same_selection(base, fastrcs::fastrcs(Dataset(x, d.y), cfg));
        }

        // Concentration steps never increase the trimmed sum of squares.
        {
            const int h = subset_size_h(d.n(), d.p(), 0.5);
            CStepResult step{random_subset(d.n(), h, rng), 0.0, false};
            double previous = subset_rss(step.subset, d);
            bool ok = true;
            for (int i = 0; i < 5 && !step.converged; ++i) {
                step = c_step(step.subset, d);
                ok = ok && step.trimmed_ss <= previous * (1.0 + 1e-12) + 1e-12;
                previous = std::min(previous, subset_rss(step.subset, d));
            }
            monotone += !ok;
        }

        // Same result for 1, 2 and 8 workers.
        {
            RcsConfig par = cfg;
            par.workers = 2;
            const RcsResult two = fastrcs::fastrcs(d, par);
            par.workers = 8;
            const RcsResult eight = fastrcs::fastrcs(d, par);
            determinism += !(bit_identical(base, two) && bit_identical(base, eight));
        }
    }
    const int failures = negative + regression + affine + monotone + determinism;
    std::ostringstream detail;
    detail << trials << " trials each; failures: nonnegativity " << negative << ", regression/scale " << regression
           << ", affine " << affine << ", c-step " << monotone << ", workers " << determinism << "; "
           << fmt("%.1f s", seconds_since(t0));
    return {failures == 0, detail.str()};
}

Verdict criterion_exact_fit()
{
    int ok = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng = make_rng(4004, seed);
        std::normal_distribution<double> g;
        Vector theta(3);
        for (int j = 0; j < 3; ++j)
            theta(j) = 2.0 * g(rng);
        Matrix x(60, 2);
        Vector y(60);
        const IndexSet planted = random_subset(60, 40, rng);
        std::vector<bool> on(60, false);
        for (int i : planted)
            on[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < 60; ++i) {
            x(i, 0) = g(rng);
            x(i, 1) = g(rng);
            y(i) = theta(0) + x(i, 0) * theta(1) + x(i, 1) * theta(2);
            if (!on[static_cast<std::size_t>(i)])
                y(i) += 3.0 * g(rng);
        }
        const Dataset d(x, y);
        RcsConfig cfg;
        cfg.seed = seed;
        const RcsResult res = fastrcs::fastrcs(d, cfg);
        double maxResid = 0.0;
        const Vector r = residual_distances(Hyperplane::from_coefficients(res.final_fit.theta), d);
        for (int i : planted)
            maxResid = std::max(maxResid, r(i));
        worst = std::max(worst, maxResid);
        ok += res.exact_fit && maxResid <= 1e-8 && res.final_fit.sigma2 == 0.0;
    }
    return {ok == 100, fmt("%.0f/100 seeds exact, worst planted residual %.2e", ok, worst)};
}

Verdict criterion_point_mass()
{
    const auto t0 = std::chrono::steady_clock::now();
    SweepGrid grid;
    grid.p_list = {4};
    grid.n = 100;
    grid.alpha = 0.5;
    grid.configurations = {Contamination::PointMass};
    grid.dx_list = {8.0};
    grid.eps_list = {0.3};
    grid.nu_list = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    grid.reps = 100;
    grid.algorithms = {"rcs", "lts"};
    grid.seed = 5005;
    grid.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const std::vector<CurveSummary> rows = summarize(run_sweep(grid));

    bool rcsOk = true;
    int ltsHigh = 0;
    std::ostringstream curve;
    for (const CurveSummary& r : rows) {
        if (r.algorithm == "rcs") {
            rcsOk = rcsOk && r.mis_rate_median <= 0.05 && r.bias_median <= 1.0;
            curve << fmt(" nu=%.0f rcs(mis %.2f, bias %.2f)", r.nu, r.mis_rate_median, r.bias_median);
        } else {
            ltsHigh += r.mis_rate_median >= 0.5;
            curve << fmt(" lts(mis %.2f)", r.mis_rate_median);
        }
    }
    std::ostringstream detail;
    detail << "rcs within limits at every nu: " << (rcsOk ? "yes" : "no") << "; lts median mis_rate >= 0.5 at "
           << ltsHigh << " nu values; " << fmt("%.1f s;", seconds_since(t0)) << curve.str();
    return {rcsOk && ltsHigh >= 3, detail.str()};
}

// Slump: the raw UCI table (No, Cement, Slag, Fly ash, Water, SP, Coarse Aggr.,
// Fine Aggr., SLUMP, FLOW, Compressive Strength) restricted to rows where
// neither slag nor fly ash is zero; the first 35 remaining rows are the old batch.
std::optional<Dataset> load_slump(std::string& why)
{
    const std::filesystem::path dir = FASTRCS_DATA_DIR;
    for (const char* name : {"slump_test.data", "slump_test.csv"}) {
        const auto path = dir / name;
        if (!std::filesystem::exists(path))
            continue;
        const CsvTable t = read_csv(path);
        if (t.values.cols() != 11) {
            why = path.string() + ": expected 11 columns";
            return std::nullopt;
        }
        std::vector<Index> keep;
        for (Index i = 0; i < t.values.rows(); ++i)
            if (t.values(i, 2) != 0.0 && t.values(i, 3) != 0.0)
                keep.push_back(i);
        Matrix x(static_cast<Index>(keep.size()), 7);
        Vector y(static_cast<Index>(keep.size()));
        for (std::size_t r = 0; r < keep.size(); ++r) {
            x.row(static_cast<Index>(r)) = t.values.row(keep[r]).segment(1, 7);
            y(static_cast<Index>(r)) = t.values(keep[r], 10);
        }
        if (keep.size() != 59) {
            why = path.string() + ": " + std::to_string(keep.size()) + " rows after filtering, expected 59";
            return std::nullopt;
        }
        return Dataset(std::move(x), std::move(y));
    }
    why = "Slump data not found: place the UCI file slump_test.data in " + dir.string();
    return std::nullopt;
}

Verdict criterion_slump()
{
    std::string why;
    const auto data = load_slump(why);
    if (!data)
        return {false, why};
    IndexSet old(35);
    std::iota(old.begin(), old.end(), 0);
    int exact = 0;
    double nearest = INFINITY;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RcsConfig cfg;
        cfg.alpha = 0.5;
        cfg.k = 25;
        cfg.l_stages = 3;
        cfg.num_starts = 500;
        cfg.seed = seed;
        const RcsResult res = fastrcs::fastrcs(*data, cfg);
        double closest = INFINITY;
        for (Index i = 35; i < 59; ++i)
            closest = std::min(closest, res.report.standardized_residuals(i));
        nearest = std::min(nearest, closest);
        exact += res.report.good_set == old && closest >= 10.0;
    }
    return {exact >= 19, fmt("good set equals the 35 old rows with nearest outlier >= 10 in %.0f/20 seeds; "
                             "smallest new-batch standardized residual %.1f",
                             exact, nearest)};
}

Verdict criterion_formulas()
{
    std::ostringstream bad;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok)
            bad << ' ' << what;
    };
    expect(subset_size_h(59, 8, 0.5) == 34, "h(59,8)");
    expect(subset_size_h(488, 11, 0.5) == 250, "h(488,11)");
    auto direct = [](int p, double alpha) {
        const double eps0 = 4.0 * (1.0 - alpha) / 5.0;
        return static_cast<int>(std::ceil(std::log(0.01) / std::log(1.0 - std::pow(1.0 - eps0, p + 1))));
    };
    expect(mp_starts(4, 0.5) == 57 && direct(4, 0.5) == 57, "mp_starts(4,0.5)");
    expect(mp_starts(4, 0.75) == 12 && direct(4, 0.75) == 12, "mp_starts(4,0.75)");
    double worst = 0.0;
    for (double q = 1e-6; q < 1.0; q += 0.00097)
        worst = std::max(worst, std::abs(normal_cdf(normal_quantile(q)) - q));
    for (int d = 1; d <= 30; ++d)
        for (double q = 0.001; q < 1.0; q += 0.0113)
            worst = std::max(worst, std::abs(chisq_cdf(chisq_quantile(q, d), d) - q));
    expect(worst <= 1e-8, "quantile round trip");
    const std::string failed = bad.str();
    return {failed.empty(), fmt("h, M_p checked; worst quantile round-trip error %.1e", worst) +
                                (failed.empty() ? "" : "; failed:" + failed)};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"I-index oracle equivalence", criterion_oracle},
        {"property suite", criterion_properties},
        {"exact fit", criterion_exact_fit},
        {"point-mass sweep, RCS vs LTS", criterion_point_mass},
        {"Slump case study", criterion_slump},
        {"formula checks", criterion_formulas},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::stoi(argv[i]));
    if (selected.empty())
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i)
            selected.push_back(i);

    int failures = 0;
    for (int id : selected) {
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::cerr << "unknown criterion " << id << '\n';
            return 2;
        }
        const auto& [name, check] = criteria[static_cast<std::size_t>(id - 1)];
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
