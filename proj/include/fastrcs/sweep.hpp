#pragma once

#include "fastrcs/metrics.hpp"
#include "fastrcs/simgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fastrcs {

/// Full factorial simulation grid; one CurvePoint per (cell, replication, algorithm).
struct SweepGrid {
    std::vector<int> p_list{4};
    std::vector<double> eps_list{0.1};
    std::vector<Contamination> configurations{Contamination::Shift};
    std::vector<double> dx_list{2.0};
    std::vector<double> nu_list{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double alpha = 0.5;
    int reps = 100;
    std::vector<std::string> algorithms{"rcs", "lts"};
    std::uint64_t seed = 1;
    int n = 0;          ///< 0 selects 25 p
    int num_starts = 0; ///< 0 selects mp_starts(p, alpha)
    int k = 25;
    int l_stages = 3;
    int workers = 1;

    void validate() const;
    std::size_t num_cells() const;
};

/// Runs one estimator on a generated sample and scores it.
CurvePoint evaluate_algorithm(const std::string& algorithm, const GeneratedSample& sample,
                              const ContaminationConfig& cell, int replication, std::uint64_t seed,
                              const SweepGrid& grid);

/// Rows ordered by cell, then replication, then algorithm, independent of `workers`.
std::vector<CurvePoint> run_sweep(const SweepGrid& grid);

} // namespace fastrcs
