#include "cli.hpp"

#include "fastrcs/io.hpp"
#include "fastrcs/lts.hpp"
#include "fastrcs/rcs.hpp"
#include "fastrcs/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fastrcs::cli {

namespace {

struct FitFlags {
    std::string input;
    std::string response;
    double alpha = 0.5;
    int k = 25;
    int l_stages = 3;
    int starts = 0;
    std::uint64_t seed = 1;
    double cutoff = 2.5;
    int workers = 1;
};

void add_fit_flags(CLI::App& cmd, FitFlags& f)
{
    cmd.add_option("--input", f.input, "CSV file with a header row")->required();
    cmd.add_option("--response", f.response, "name of the response column")->required();
    cmd.add_option("--alpha", f.alpha, "assumed uncontaminated share")->check(CLI::Range(0.5, 0.999999));
    cmd.add_option("--k", f.k, "hyperplanes per subset")->check(CLI::PositiveNumber);
    cmd.add_option("--l-stages", f.l_stages, "growing stages")->check(CLI::PositiveNumber);
    cmd.add_option("--starts", f.starts, "starting subsets (0 = automatic)")->check(CLI::NonNegativeNumber);
    cmd.add_option("--seed", f.seed, "random seed");
    cmd.add_option("--cutoff", f.cutoff, "standardized residual cutoff")->check(CLI::PositiveNumber);
    cmd.add_option("--workers", f.workers, "threads")->check(CLI::PositiveNumber);
}

struct FitOutcome {
    RcsResult result;
    double seconds = 0.0;
};

FitOutcome run_algorithm(const std::string& algo, const Dataset& data, const FitFlags& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    FitOutcome out;
    if (algo == "rcs") {
        RcsConfig cfg;
        cfg.alpha = f.alpha;
        cfg.k = f.k;
        cfg.l_stages = f.l_stages;
        cfg.num_starts = f.starts;
        cfg.seed = f.seed;
        cfg.reweight_cutoff = f.cutoff;
        cfg.workers = f.workers;
        out.result = fastrcs(data, cfg);
    } else {
        LtsConfig cfg;
        cfg.alpha = f.alpha;
        cfg.num_starts = f.starts;
        cfg.seed = f.seed;
        cfg.reweight_cutoff = f.cutoff;
        cfg.workers = f.workers;
        out.result = fastlts(data, cfg).fit;
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    out.seconds = std::max(dt.count(), 1e-9);
    return out;
}

void emit(const std::string& path, const std::string& content, std::ostream& out)
{
    if (path.empty() || path == "-")
        out << content;
    else
        write_file_atomic(path, content);
}

std::vector<double> default_nu_list()
{
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

std::filesystem::path summary_path_for(const std::filesystem::path& out)
{
    std::filesystem::path s = out;
    s.replace_extension();
    s += ".summary.csv";
    return s;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"FastRCS robust regression and outlier detection"};
    app.name(args.empty() ? "fastrcs" : std::filesystem::path(args[0]).filename().string());
    app.require_subcommand(1);

    // fit
    FitFlags fitFlags;
    std::string fitAlgo = "rcs";
    std::string fitOut;
    std::string fitFormat = "json";
    auto* fit = app.add_subcommand("fit", "fit a CSV dataset and report outliers");
    add_fit_flags(*fit, fitFlags);
    fit->add_option("--algo", fitAlgo, "estimator")->check(CLI::IsMember({"rcs", "lts"}));
    fit->add_option("--out", fitOut, "report path (default: standard output)");
    fit->add_option("--format", fitFormat, "report format")->check(CLI::IsMember({"json", "csv"}));

    // simulate
    SweepGrid grid;
    std::string preset;
    std::string configName = "both";
    std::string simOut;
    std::string summaryOut;
    auto* sim = app.add_subcommand("simulate", "run a contamination sweep and write curve CSVs");
    sim->add_option("--preset", preset, "alpha50 or alpha75 grid (explicit flags override)")
        ->check(CLI::IsMember({"alpha50", "alpha75"}));
    auto* pOpt = sim->add_option("--p-list", grid.p_list, "dimensions")->delimiter(',');
    auto* epsOpt = sim->add_option("--eps-list", grid.eps_list, "contamination rates")->delimiter(',');
    auto* confOpt = sim->add_option("--config", configName, "contamination shape")
                        ->check(CLI::IsMember({"shift", "pointmass", "both"}));
    auto* dxOpt = sim->add_option("--dx-list", grid.dx_list, "design-space separations")->delimiter(',');
    auto* nuOpt = sim->add_option("--nu-list", grid.nu_list, "vertical separations")->delimiter(',');
    auto* alphaOpt = sim->add_option("--alpha", grid.alpha, "assumed uncontaminated share");
    auto* repsOpt = sim->add_option("--reps", grid.reps, "replications per cell");
    sim->add_option("--algos", grid.algorithms, "estimators")->delimiter(',');
    sim->add_option("--seed", grid.seed, "master seed");
    sim->add_option("--n", grid.n, "sample size (0 = 25 p)");
    sim->add_option("--starts", grid.num_starts, "starting subsets (0 = automatic)");
    sim->add_option("--k", grid.k, "hyperplanes per subset");
    sim->add_option("--l-stages", grid.l_stages, "growing stages");
    sim->add_option("--workers", grid.workers, "threads");
    sim->add_option("--out", simOut, "curve CSV path")->required();
    sim->add_option("--summary-out", summaryOut, "summary CSV path (default: <out>.summary.csv)");

    // bench
    FitFlags benchFlags;
    std::vector<std::string> benchAlgos{"rcs", "lts"};
    std::string benchOut;
    auto* bench = app.add_subcommand("bench", "compare estimators on one dataset");
    add_fit_flags(*bench, benchFlags);
    bench->add_option("--algos", benchAlgos, "estimators")->delimiter(',')->check(CLI::IsMember({"rcs", "lts"}));
    bench->add_option("--out", benchOut, "table path (default: standard output)");

    // generate
    ContaminationConfig gen;
    std::string genConfig = "shift";
    std::string genOut;
    std::string genOutliers;
    auto* generateCmd = app.add_subcommand("generate", "write one contaminated sample as CSV");
    generateCmd->add_option("--p", gen.p, "model dimension")->required();
    generateCmd->add_option("--n", gen.n, "sample size (0 = 25 p)");
    generateCmd->add_option("--eps", gen.epsilon, "contamination rate");
    generateCmd->add_option("--config", genConfig, "contamination shape")->check(CLI::IsMember({"shift", "pointmass"}));
    generateCmd->add_option("--dx", gen.d_x, "design-space separation");
    generateCmd->add_option("--nu", gen.nu, "vertical separation");
    generateCmd->add_option("--alpha", gen.alpha, "assumed uncontaminated share");
    generateCmd->add_option("--seed", gen.seed, "seed");
    generateCmd->add_option("--out", genOut, "CSV path")->required();
    generateCmd->add_option("--outliers-out", genOutliers, "outlier index file (default: <out>.outliers)");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    if (argv.empty())
        argv.push_back("fastrcs");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadFlags;
    }

    try {
        if (fit->parsed()) {
            std::vector<std::string> names;
            const Dataset data = dataset_from_table(read_csv(fitFlags.input), fitFlags.response, &names);
            const FitOutcome res = run_algorithm(fitAlgo, data, fitFlags);
            const FitReport report = make_fit_report(fitAlgo, data, res.result, names);
            emit(fitOut, fitFormat == "json" ? fit_report_json(report) : fit_report_csv(report), out);
            std::ostream& summary = fitOut.empty() ? err : out;
            summary << "algorithm=" << fitAlgo << " n=" << report.n << " p=" << report.p << " h=" << report.h
                << " flagged=" << res.result.report.num_flagged()
                << " sigma_hat=" << format_double(report.sigma_hat) << '\n';
            return kOk;
        }

        if (sim->parsed()) {
            if (preset == "alpha50" || preset == "alpha75") {
                const bool a75 = preset == "alpha75";
                if (pOpt->count() == 0)
                    grid.p_list = {4, 8, 12, 16};
                if (epsOpt->count() == 0)
                    grid.eps_list = a75 ? std::vector<double>{0.1, 0.2} : std::vector<double>{0.1, 0.2, 0.3, 0.4};
                if (confOpt->count() == 0)
                    configName = "both";
                if (dxOpt->count() == 0)
                    grid.dx_list = {2, 8};
                if (nuOpt->count() == 0)
                    grid.nu_list = default_nu_list();
                if (alphaOpt->count() == 0)
                    grid.alpha = a75 ? 0.75 : 0.5;
                if (repsOpt->count() == 0)
                    grid.reps = 1000;
            }
            if (configName == "both")
                grid.configurations = {Contamination::Shift, Contamination::PointMass};
            else
                grid.configurations = {parse_contamination(configName)};
            try {
                grid.validate();
            } catch (const std::invalid_argument& e) {
                err << "invalid grid: " << e.what() << '\n';
                return kBadFlags;
            }
            const std::vector<CurvePoint> points = run_sweep(grid);
            const std::vector<CurveSummary> summary = summarize(points);
            write_file_atomic(simOut, curve_points_csv(points));
            const std::filesystem::path sumPath = summaryOut.empty() ? summary_path_for(simOut) : std::filesystem::path(summaryOut);
            write_file_atomic(sumPath, curve_summary_csv(summary));
            out << "cells=" << grid.num_cells() << " rows=" << points.size() << " summary=" << sumPath.string()
                << '\n';
            return kOk;
        }

        if (bench->parsed()) {
            const Dataset data = dataset_from_table(read_csv(benchFlags.input), benchFlags.response);
            std::ostringstream table;
            table << "algorithm,wall_seconds,n,p,h,num_flagged,sigma_hat";
            for (Index j = 0; j < data.p(); ++j)
                table << ",theta" << j;
            table << '\n';
            for (const std::string& algo : benchAlgos) {
                const FitOutcome res = run_algorithm(algo, data, benchFlags);
                const RcsResult& r = res.result;
                table << algo << ',' << format_double(res.seconds) << ',' << data.n() << ',' << data.p() << ','
                      << r.h << ',' << r.report.num_flagged() << ','
                      << format_double(std::sqrt(std::max(0.0, r.final_fit.sigma2)));
                for (Index j = 0; j < r.final_fit.theta.size(); ++j)
                    table << ',' << format_double(r.final_fit.theta(j));
                table << '\n';
            }
            emit(benchOut, table.str(), out);
            return kOk;
        }

        if (generateCmd->parsed()) {
            gen.configuration = parse_contamination(genConfig);
            try {
                gen.validate();
            } catch (const std::invalid_argument& e) {
                err << "invalid configuration: " << e.what() << '\n';
                return kBadFlags;
            }
            const GeneratedSample sample = generate(gen);
            std::ostringstream csv;
            write_dataset_csv(csv, sample.data);
            std::ostringstream idx;
            write_index_file(idx, sample.outliers);
            write_file_atomic(genOut, csv.str());
            write_file_atomic(genOutliers.empty() ? genOut + ".outliers" : genOutliers, idx.str());
            out << "n=" << sample.data.n() << " p=" << sample.data.p() << " outliers=" << sample.outliers.size()
                << '\n';
            return kOk;
        }
    } catch (const CsvError& e) {
        err << "input error: " << e.what() << '\n';
        return kBadInput;
    } catch (const DegenerateDataError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const SingularError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "invalid arguments: " << e.what() << '\n';
        return kBadFlags;
    }
    return kBadFlags;
}

} // namespace fastrcs::cli
