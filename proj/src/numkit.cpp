#include "fastrcs/numkit.hpp"

#include <array>
#include <limits>
#include <numbers>

namespace fastrcs {

double median(const Vector& v)
{
    const Index n = v.size();
    if (n == 0)
        throw std::invalid_argument("median: empty vector");
    std::vector<double> buf(v.data(), v.data() + n);
    auto mid = buf.begin() + n / 2;
    std::nth_element(buf.begin(), mid, buf.end());
    const double upper = *mid;
    if (n % 2 == 1)
        return upper;
    const double lower = *std::max_element(buf.begin(), mid);
    return 0.5 * (lower + upper);
}

namespace {

OlsFit ols_on_design(const Matrix& design, const Vector& response)
{
    const Index m = design.rows();
    const Index p = design.cols();
    if (m < p)
        throw SingularError("ols_fit: fewer selected rows than coefficients");

    // Equilibrate columns so the rank decision does not depend on units.
    Vector colScale = design.cwiseAbs().colwise().maxCoeff().transpose();
    for (Index j = 0; j < p; ++j)
        if (!(colScale(j) > 0.0))
            throw SingularError("ols_fit: design has an all-zero column");
    const Matrix scaled = design * colScale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
    qr.setThreshold(kPivotTolerance);
    if (qr.rank() < p)
        throw SingularError("ols_fit: weighted design is rank deficient");

    OlsFit fit;
    fit.coefficients = qr.solve(response).cwiseQuotient(colScale);
    const Vector resid = response - design * fit.coefficients;
    const double rss = resid.squaredNorm();
    fit.sigma2 = (rss < 1e-20 || m == p) ? 0.0 : rss / static_cast<double>(m - p);
    return fit;
}

Matrix with_intercept(const Matrix& x, const std::vector<int>& rows)
{
    Matrix design(static_cast<Index>(rows.size()), x.cols() + 1);
    for (Index r = 0; r < design.rows(); ++r) {
        design(r, 0) = 1.0;
        design.row(r).tail(x.cols()) = x.row(rows[static_cast<std::size_t>(r)]);
    }
    return design;
}

} // namespace

OlsFit ols_fit_rows(const Matrix& x, const Vector& y, const std::vector<int>& rows)
{
    if (x.rows() != y.size())
        throw std::invalid_argument("ols_fit: X and y disagree on the number of rows");
    Vector response(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        response(static_cast<Index>(r)) = y(rows[r]);
    return ols_on_design(with_intercept(x, rows), response);
}

OlsFit ols_fit(const Matrix& x, const Vector& y, const Vector* weights)
{
    if (weights && weights->size() != y.size())
        throw std::invalid_argument("ols_fit: weight vector has the wrong length");
    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(y.size()));
    for (Index i = 0; i < y.size(); ++i)
        if (!weights || (*weights)(i) != 0.0)
            rows.push_back(static_cast<int>(i));
    return ols_fit_rows(x, y, rows);
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double q)
{
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("normal_quantile: probability must lie in (0, 1)");

    // Acklam's rational approximation, relative error about 1.15e-9.
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double lowTail = 0.02425;

    double x = 0.0;
    if (q < lowTail) {
        const double t = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
            ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    } else if (q <= 1.0 - lowTail) {
        const double u = q - 0.5;
        const double r = u * u;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double t = std::sqrt(-2.0 * std::log1p(-q));
        x = -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
            ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    }

    // One Halley step against the erfc-based CDF.
    const double err = normal_cdf(x) - q;
    const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double regularized_gamma_p(double a, double x)
{
    if (!(a > 0.0) || x < 0.0)
        throw std::domain_error("regularized_gamma_p: invalid arguments");
    if (x == 0.0)
        return 0.0;
    const double logPrefix = a * std::log(x) - x - std::lgamma(a);
    constexpr double eps = 1e-16;
    constexpr int maxIter = 10000;

    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < maxIter; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps)
                break;
        }
        return std::min(1.0, sum * std::exp(logPrefix));
    }

    // Modified Lentz evaluation of the continued fraction for Q(a, x).
    constexpr double tiny = 1e-300;
    double bcoef = x + 1.0 - a;
    double cc = 1.0 / tiny;
    double dd = 1.0 / bcoef;
    double h = dd;
    for (int n = 1; n < maxIter; ++n) {
        const double an = -n * (n - a);
        bcoef += 2.0;
        dd = an * dd + bcoef;
        if (std::abs(dd) < tiny)
            dd = tiny;
        cc = bcoef + an / cc;
        if (std::abs(cc) < tiny)
            cc = tiny;
        dd = 1.0 / dd;
        const double delta = dd * cc;
        h *= delta;
        if (std::abs(delta - 1.0) < eps)
            break;
    }
    return std::max(0.0, 1.0 - std::exp(logPrefix) * h);
}

double chisq_cdf(double x, int dof)
{
    if (dof < 1)
        throw std::domain_error("chisq_cdf: degrees of freedom must be at least 1");
    if (x <= 0.0)
        return 0.0;
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chisq_quantile(double q, int dof)
{
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("chisq_quantile: probability must lie in (0, 1)");
    if (dof < 1)
        throw std::domain_error("chisq_quantile: degrees of freedom must be at least 1");

    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(dof));
    while (chisq_cdf(hi, dof) < q)
        hi *= 2.0;

    // Newton on the CDF, kept inside a shrinking bracket.
    double x = 0.5 * (lo + hi);
    const double a = 0.5 * dof;
    for (int iter = 0; iter < 500; ++iter) {
        const double f = chisq_cdf(x, dof) - q;
        if (f == 0.0)
            return x;
        (f < 0.0 ? lo : hi) = x;
        const double logDensity = (a - 1.0) * std::log(x) - 0.5 * x - a * std::numbers::ln2 - std::lgamma(a);
        double next = x - f / std::exp(logDensity);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, x) || hi - lo <= 1e-300)
            return next;
        x = next;
    }
    return x;
}

} // namespace fastrcs
