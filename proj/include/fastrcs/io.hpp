#pragma once

#include "fastrcs/metrics.hpp"
#include "fastrcs/rcs.hpp"
#include "fastrcs/simgen.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastrcs {

/// Malformed or unreadable CSV input.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> header;
    Matrix values; ///< rows x columns, all finite
};

/// Header row followed by numeric rows; quoted fields allowed, NaN and inf rejected.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Response column `response`, every other column a predictor.
Dataset dataset_from_table(const CsvTable& table, const std::string& response,
                           std::vector<std::string>* predictor_names = nullptr);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Writes predictors x1..x{p-1} and the response column `y`.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_index_file(std::ostream& out, const IndexSet& indices);
IndexSet read_index_file(const std::filesystem::path& path);

/// Writes `content` next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

inline constexpr int kReportSchemaVersion = 1;

struct FitReportRow {
    int index = 0;
    double standardized_residual = 0.0;
    bool in_h_plus = false;
    bool flagged = false;
};

struct FitReport {
    int schema_version = kReportSchemaVersion;
    std::string algorithm;
    int n = 0;
    int p = 0;
    int h = 0;
    std::vector<std::string> coefficient_names;
    Vector coefficients;
    double sigma_hat = 0.0;
    std::optional<double> i_index;
    bool exact_fit = false;
    std::vector<FitReportRow> rows;
};

FitReport make_fit_report(const std::string& algorithm, const Dataset& data, const RcsResult& result,
                          const std::vector<std::string>& predictor_names);

/// JSON text; infinite standardized residuals are written as null.
std::string fit_report_json(const FitReport& report);
/// Metadata as leading "# key=value" lines, then one row per observation.
std::string fit_report_csv(const FitReport& report);

std::string curve_points_csv(const std::vector<CurvePoint>& points);
std::string curve_summary_csv(const std::vector<CurveSummary>& rows);

} // namespace fastrcs
