#include "fastrcs/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fastrcs {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Quoted fields may contain commas and doubled quotes;
// whitespace around the quotes is ignored.
std::vector<std::string> split_record(const std::string& line, std::size_t lineNo)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool wasQuoted = false;
    auto finish = [&] {
        fields.push_back(wasQuoted ? field : trim(field));
        field.clear();
        wasQuoted = false;
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == ',') {
            finish();
        } else if (ch == ' ' || ch == '\t' || ch == '\r') {
            if (!wasQuoted)
                field += ch;
        } else if (wasQuoted) {
            throw CsvError("line " + std::to_string(lineNo) + ": text after a closing quote");
        } else if (ch == '"') {
            if (!trim(field).empty())
                throw CsvError("line " + std::to_string(lineNo) + ": quote inside an unquoted field");
            field.clear();
            quoted = true;
            wasQuoted = true;
        } else {
            field += ch;
        }
    }
    if (quoted)
        throw CsvError("line " + std::to_string(lineNo) + ": unterminated quoted field");
    finish();
    return fields;
}

double parse_number(const std::string& text, std::size_t lineNo, std::size_t column)
{
    const std::string s = trim(text);
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (!s.empty() && *begin == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw CsvError("line " + std::to_string(lineNo) + ", column " + std::to_string(column + 1) +
                       ": not a finite number: '" + text + "'");
    return v;
}

} // namespace

CsvTable parse_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    std::size_t lineNo = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineNo;
        if (lineNo == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0)
            line.erase(0, 3);
        if (trim(line).empty())
            continue;
        auto fields = split_record(line, lineNo);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw CsvError("line " + std::to_string(lineNo) + ": expected " +
                           std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c)
            row[c] = parse_number(fields[c], lineNo, c);
        rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw CsvError("empty input: no header row");

    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.header.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw CsvError("cannot open " + path.string());
    return parse_csv(in);
}

Dataset dataset_from_table(const CsvTable& table, const std::string& response,
                           std::vector<std::string>* predictor_names)
{
    const auto it = std::find(table.header.begin(), table.header.end(), response);
    if (it == table.header.end())
        throw CsvError("response column '" + response + "' not found in header");
    const auto responseCol = static_cast<Index>(it - table.header.begin());

    const Index cols = table.values.cols();
    Matrix x(table.values.rows(), cols - 1);
    std::vector<std::string> names;
    for (Index c = 0, out = 0; c < cols; ++c) {
        if (c == responseCol)
            continue;
        x.col(out++) = table.values.col(c);
        names.push_back(table.header[static_cast<std::size_t>(c)]);
    }
    if (predictor_names)
        *predictor_names = std::move(names);
    try {
        return Dataset(std::move(x), table.values.col(responseCol));
    } catch (const std::invalid_argument& e) {
        throw CsvError(e.what());
    }
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_dataset_csv(std::ostream& out, const Dataset& data)
{
    for (Index j = 0; j < data.x.cols(); ++j)
        out << 'x' << (j + 1) << ',';
    out << "y\n";
    for (Index i = 0; i < data.n(); ++i) {
        for (Index j = 0; j < data.x.cols(); ++j)
            out << format_double(data.x(i, j)) << ',';
        out << format_double(data.y(i)) << '\n';
    }
}

void write_index_file(std::ostream& out, const IndexSet& indices)
{
    for (int i : indices)
        out << i << '\n';
}

IndexSet read_index_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw CsvError("cannot open " + path.string());
    IndexSet out;
    std::string line;
    while (std::getline(in, line)) {
        const std::string s = trim(line);
        if (s.empty())
            continue;
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v < 0)
            throw CsvError("bad index line: '" + line + "'");
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed while writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

FitReport make_fit_report(const std::string& algorithm, const Dataset& data, const RcsResult& result,
                          const std::vector<std::string>& predictor_names)
{
    FitReport report;
    report.algorithm = algorithm;
    report.n = static_cast<int>(data.n());
    report.p = static_cast<int>(data.p());
    report.h = result.h;
    report.coefficient_names.push_back("(intercept)");
    for (Index j = 0; j < data.x.cols(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        report.coefficient_names.push_back(jj < predictor_names.size() ? predictor_names[jj]
                                                                        : "x" + std::to_string(j + 1));
    }
    report.coefficients = result.final_fit.theta;
    report.sigma_hat = std::sqrt(std::max(0.0, result.final_fit.sigma2));
    report.i_index = result.i_index_of_best;
    report.exact_fit = result.exact_fit;
    const OutlyingnessReport& o = result.report;
    for (Index i = 0; i < data.n(); ++i) {
        const auto ii = static_cast<std::size_t>(i);
        report.rows.push_back({static_cast<int>(i), o.standardized_residuals(i),
                               std::binary_search(o.h_plus.begin(), o.h_plus.end(), static_cast<int>(i)),
                               static_cast<bool>(o.flags[ii])});
    }
    return report;
}

std::string fit_report_json(const FitReport& report)
{
    using nlohmann::json;
    json doc;
    doc["schema_version"] = report.schema_version;
    doc["algorithm"] = report.algorithm;
    doc["n"] = report.n;
    doc["p"] = report.p;
    doc["h"] = report.h;
    json coefs = json::array();
    for (Index j = 0; j < report.coefficients.size(); ++j)
        coefs.push_back({{"name", report.coefficient_names[static_cast<std::size_t>(j)]},
                         {"value", report.coefficients(j)}});
    doc["coefficients"] = coefs;
    doc["sigma_hat"] = report.sigma_hat;
    doc["i_index"] = report.i_index ? json(*report.i_index) : json(nullptr);
    doc["exact_fit"] = report.exact_fit;
    std::size_t flagged = 0;
    json rows = json::array();
    for (const FitReportRow& r : report.rows) {
        flagged += r.flagged ? 1 : 0;
        rows.push_back({{"index", r.index},
                        {"standardized_residual",
                         std::isfinite(r.standardized_residual) ? json(r.standardized_residual) : json(nullptr)},
                        {"in_h_plus", r.in_h_plus},
                        {"flagged", r.flagged}});
    }
    doc["num_flagged"] = flagged;
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

std::string fit_report_csv(const FitReport& report)
{
    std::ostringstream out;
    out << "# schema_version=" << report.schema_version << '\n';
    out << "# algorithm=" << report.algorithm << '\n';
    out << "# n=" << report.n << '\n' << "# p=" << report.p << '\n' << "# h=" << report.h << '\n';
    for (Index j = 0; j < report.coefficients.size(); ++j)
        out << "# coefficient." << report.coefficient_names[static_cast<std::size_t>(j)] << '='
            << format_double(report.coefficients(j)) << '\n';
    out << "# sigma_hat=" << format_double(report.sigma_hat) << '\n';
    if (report.i_index)
        out << "# i_index=" << format_double(*report.i_index) << '\n';
    out << "# exact_fit=" << (report.exact_fit ? "true" : "false") << '\n';
    out << "index,standardized_residual,in_h_plus,flagged\n";
    for (const FitReportRow& r : report.rows)
        out << r.index << ',' << format_double(r.standardized_residual) << ',' << (r.in_h_plus ? 1 : 0)
            << ',' << (r.flagged ? 1 : 0) << '\n';
    return out.str();
}

std::string curve_points_csv(const std::vector<CurvePoint>& points)
{
    std::ostringstream out;
    out << "algorithm,configuration,p,epsilon,d_x,alpha,nu,replication,bias,mis_rate\n";
    for (const CurvePoint& c : points)
        out << c.algorithm << ',' << to_string(c.configuration) << ',' << c.p << ','
            << format_double(c.epsilon) << ',' << format_double(c.d_x) << ',' << format_double(c.alpha)
            << ',' << format_double(c.nu) << ',' << c.replication << ',' << format_double(c.bias) << ','
            << format_double(c.mis_rate) << '\n';
    return out.str();
}

std::string curve_summary_csv(const std::vector<CurveSummary>& rows)
{
    std::ostringstream out;
    out << "algorithm,configuration,p,epsilon,d_x,alpha,nu,replications,bias_median,bias_p75,"
           "mis_rate_median,mis_rate_p75\n";
    for (const CurveSummary& s : rows)
        out << s.algorithm << ',' << to_string(s.configuration) << ',' << s.p << ','
            << format_double(s.epsilon) << ',' << format_double(s.d_x) << ',' << format_double(s.alpha)
            << ',' << format_double(s.nu) << ',' << s.replications << ',' << format_double(s.bias_median)
            << ',' << format_double(s.bias_p75) << ',' << format_double(s.mis_rate_median) << ','
            << format_double(s.mis_rate_p75) << '\n';
    return out.str();
}

} // namespace fastrcs
