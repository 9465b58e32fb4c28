#include "fastrcs/simgen.hpp"

#include "fastrcs/random.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fastrcs {

std::string_view to_string(Contamination c)
{
    return c == Contamination::Shift ? "shift" : "pointmass";
}

Contamination parse_contamination(std::string_view name)
{
    if (name == "shift")
        return Contamination::Shift;
    if (name == "pointmass")
        return Contamination::PointMass;
    throw std::invalid_argument("unknown contamination configuration: " + std::string(name));
}

int ContaminationConfig::num_outliers() const
{
    return static_cast<int>(std::floor(epsilon * sample_size() + 1e-9));
}

void ContaminationConfig::validate() const
{
    if (p < 2)
        throw std::invalid_argument("ContaminationConfig: p must be at least 2");
    if (sample_size() <= p)
        throw std::invalid_argument("ContaminationConfig: n must exceed p");
    if (!(epsilon >= 0.0 && epsilon < 0.5))
        throw std::invalid_argument("ContaminationConfig: epsilon must lie in [0, 0.5)");
    if (!(d_x >= 0.0) || !(nu >= 0.0))
        throw std::invalid_argument("ContaminationConfig: separations must be nonnegative");
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw std::invalid_argument("ContaminationConfig: alpha must lie in [0.5, 1)");
}

double leverage_width(const Vector& x, Index n, double sigma)
{
    const double nd = static_cast<double>(n);
    return normal_quantile(0.975) * sigma * std::sqrt(1.0 + 1.0 / nd + x.squaredNorm() / (nd - 1.0));
}

int mp_starts(int p, double alpha, double confidence)
{
    const double eps0 = 4.0 * (1.0 - alpha) / 5.0;
    const double cleanStart = std::pow(1.0 - eps0, p + 1);
    if (cleanStart >= 1.0)
        return 1;
    const double m = std::log(1.0 - confidence) / std::log1p(-cleanStart);
    return std::max(1, static_cast<int>(std::ceil(m)));
}

namespace {

// Shift along the first axis that makes the smallest row norm of `xc` equal
// to `target`. Empty when some row can never get that close.
std::optional<double> translation_for_min_norm(const Matrix& xc, double target)
{
    std::optional<double> shift;
    for (Index i = 0; i < xc.rows(); ++i) {
        const double rest = xc.row(i).tail(xc.cols() - 1).squaredNorm();
        const double slack = target * target - rest;
        if (slack < 0.0)
            continue;
        const double t = -xc(i, 0) + std::sqrt(slack);
        shift = shift ? std::max(*shift, t) : t;
    }
    return shift;
}

} // namespace

GeneratedSample generate(const ContaminationConfig& cfg)
{
    cfg.validate();
    const int n = cfg.sample_size();
    const int dims = cfg.p - 1;
    const int nc = cfg.num_outliers();
    const bool pointMass = cfg.configuration == Contamination::PointMass;
    const double spread = pointMass ? 1e-2 : 1.0;

    Rng rng = make_rng(cfg.seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&](Index rows, Index cols, double sd) {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j)
                m(i, j) = sd * gauss(rng);
        return m;
    };

    IndexSet all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    IndexSet outliers = sample_without_replacement(all, static_cast<std::size_t>(nc), rng);
    std::sort(outliers.begin(), outliers.end());

    Matrix x = draw(n, dims, 1.0);
    Vector y = draw(n, 1, 1.0).col(0);

    if (nc > 0) {
        const double target = cfg.d_x * std::sqrt(chisq_quantile(0.95, dims));
        Matrix xc;
        std::optional<double> shift;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            xc = draw(nc, dims, spread);
            if (target == 0.0)
                break;
            shift = translation_for_min_norm(xc, target);
            if (shift)
                break;
        }
        if (target > 0.0) {
            if (!shift)
                throw std::runtime_error("generate: cannot place the outlier cluster");
            xc.col(0).array() += *shift;
        }

        const Vector noise = draw(nc, 1, spread).col(0);
        Vector widths(nc);
        for (int i = 0; i < nc; ++i)
            widths(i) = leverage_width(xc.row(i).transpose(), n);
        double offset = -noise(0);
        if (cfg.nu > 0.0)
            offset = (cfg.nu * widths - noise).maxCoeff();

        for (int i = 0; i < nc; ++i) {
            const int row = outliers[static_cast<std::size_t>(i)];
            x.row(row) = xc.row(i);
            y(row) = offset + noise(i);
        }
    }

    GeneratedSample sample;
    sample.data = Dataset(std::move(x), std::move(y));
    sample.outliers = std::move(outliers);
    sample.true_theta = Vector::Zero(cfg.p);
    sample.sigma2 = 1.0;
    return sample;
}

} // namespace fastrcs
