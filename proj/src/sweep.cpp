#include "fastrcs/sweep.hpp"

#include "fastrcs/lts.hpp"
#include "fastrcs/random.hpp"
#include "fastrcs/rcs.hpp"
#include "parallel.hpp"

#include <stdexcept>

namespace fastrcs {

void SweepGrid::validate() const
{
    if (p_list.empty() || eps_list.empty() || configurations.empty() || dx_list.empty() ||
        nu_list.empty() || algorithms.empty())
        throw std::invalid_argument("sweep: every grid axis needs at least one value");
    if (reps < 1)
        throw std::invalid_argument("sweep: reps must be at least 1");
    for (const auto& a : algorithms)
        if (a != "rcs" && a != "lts")
            throw std::invalid_argument("sweep: unknown algorithm '" + a + "'");
    for (int p : p_list)
        for (double eps : eps_list)
            for (double dx : dx_list)
                for (double nu : nu_list) {
                    ContaminationConfig c;
                    c.p = p;
                    c.n = n;
                    c.epsilon = eps;
                    c.d_x = dx;
                    c.nu = nu;
                    c.alpha = alpha;
                    c.validate();
                }
}

std::size_t SweepGrid::num_cells() const
{
    return p_list.size() * eps_list.size() * configurations.size() * dx_list.size() * nu_list.size();
}

CurvePoint evaluate_algorithm(const std::string& algorithm, const GeneratedSample& sample,
                              const ContaminationConfig& cell, int replication, std::uint64_t seed,
                              const SweepGrid& grid)
{
    RcsResult fit;
    if (algorithm == "rcs") {
        RcsConfig cfg;
        cfg.alpha = grid.alpha;
        cfg.k = grid.k;
        cfg.l_stages = grid.l_stages;
        cfg.num_starts = grid.num_starts;
        cfg.seed = seed;
        fit = fastrcs(sample.data, cfg);
    } else if (algorithm == "lts") {
        LtsConfig cfg;
        cfg.alpha = grid.alpha;
        cfg.num_starts = grid.num_starts;
        cfg.seed = seed;
        fit = fastlts(sample.data, cfg).fit;
    } else {
        throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
    }

    CurvePoint pt;
    pt.algorithm = algorithm;
    pt.configuration = cell.configuration;
    pt.p = cell.p;
    pt.epsilon = cell.epsilon;
    pt.d_x = cell.d_x;
    pt.alpha = cell.alpha;
    pt.nu = cell.nu;
    pt.replication = replication;
    pt.bias = bias(fit.final_fit.theta - sample.true_theta);
    pt.mis_rate = mis_rate(sample.outliers, fit.report.h_plus);
    return pt;
}

std::vector<CurvePoint> run_sweep(const SweepGrid& grid)
{
    grid.validate();
    std::vector<ContaminationConfig> cells;
    for (int p : grid.p_list)
        for (double eps : grid.eps_list)
            for (Contamination conf : grid.configurations)
                for (double dx : grid.dx_list)
                    for (double nu : grid.nu_list) {
                        ContaminationConfig c;
                        c.p = p;
                        c.n = grid.n;
                        c.epsilon = eps;
                        c.configuration = conf;
                        c.d_x = dx;
                        c.nu = nu;
                        c.alpha = grid.alpha;
                        cells.push_back(c);
                    }

    const std::size_t algos = grid.algorithms.size();
    const auto reps = static_cast<std::size_t>(grid.reps);
    std::vector<CurvePoint> points(cells.size() * reps * algos);

    detail::parallel_for(static_cast<int>(cells.size() * reps), grid.workers, [&](int item) {
        const std::size_t cellIdx = static_cast<std::size_t>(item) / reps;
        const std::size_t rep = static_cast<std::size_t>(item) % reps;
        ContaminationConfig cell = cells[cellIdx];
        const std::uint64_t sampleSeed = substream_seed(substream_seed(grid.seed, cellIdx), rep);
        cell.seed = sampleSeed;
        const GeneratedSample sample = generate(cell);
        const std::uint64_t fitSeed = substream_seed(sampleSeed, 1);
        for (std::size_t a = 0; a < algos; ++a)
            points[static_cast<std::size_t>(item) * algos + a] =
                evaluate_algorithm(grid.algorithms[a], sample, cell, static_cast<int>(rep), fitSeed, grid);
    });
    return points;
}

} // namespace fastrcs
