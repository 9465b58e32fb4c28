#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fastrcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a linear system (or a weighted design) is numerically singular.
class SingularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative pivot threshold below which a system is declared singular.
inline constexpr double kPivotTolerance = 1e-12;

/// Gaussian elimination with partial pivoting on a square system.
///
/// Returns std::nullopt when a pivot falls below kPivotTolerance times the
/// largest absolute entry of the original matrix.
template <typename DerivedA, typename DerivedB>
std::optional<Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1>>
try_solve_linear(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    using Scalar = typename DerivedA::Scalar;
    using std::abs;
    const Index n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw std::invalid_argument("try_solve_linear: dimension mismatch");

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lu = a;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = b;
    const Scalar scale = n > 0 ? lu.cwiseAbs().maxCoeff() : Scalar(0);
    const Scalar threshold = Scalar(kPivotTolerance) * scale;
    if (n > 0 && !(scale > Scalar(0)))
        return std::nullopt;

    for (Index k = 0; k < n; ++k) {
        Index pivot = k;
        lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot);
        pivot += k;
        if (!(abs(lu(pivot, k)) > threshold))
            return std::nullopt;
        if (pivot != k) {
            lu.row(k).swap(lu.row(pivot));
            std::swap(x(k), x(pivot));
        }
        for (Index i = k + 1; i < n; ++i) {
            const Scalar factor = lu(i, k) / lu(k, k);
            if (factor == Scalar(0))
                continue;
            lu.row(i).tail(n - k - 1) -= factor * lu.row(k).tail(n - k - 1);
            x(i) -= factor * x(k);
        }
    }
    for (Index k = n - 1; k >= 0; --k) {
        Scalar acc = x(k);
        for (Index j = k + 1; j < n; ++j)
            acc -= lu(k, j) * x(j);
        x(k) = acc / lu(k, k);
    }
    return x;
}

/// Throwing variant of try_solve_linear.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1>
solve_linear(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    auto x = try_solve_linear(a, b);
    if (!x)
        throw SingularError("solve_linear: matrix is singular to working precision");
    return std::move(*x);
}

/// k-th smallest entry (1-based rank).
template <typename Derived>
typename Derived::Scalar order_statistic(const Eigen::DenseBase<Derived>& v, Index k)
{
    if (k < 1 || k > v.size())
        throw std::out_of_range("order_statistic: rank out of range");
    const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> values = v.derived();
    std::vector<typename Derived::Scalar> buf(values.data(), values.data() + values.size());
    auto nth = buf.begin() + (k - 1);
    std::nth_element(buf.begin(), nth, buf.end());
    return *nth;
}

/// Median; the mean of the two central order statistics when the size is even.
double median(const Vector& v);

struct OlsFit {
    Vector coefficients; ///< intercept first
    double sigma2 = 0.0;
};

/// Least squares with a prepended intercept column.
///
/// `weights`, when given, is a 0/1 selector: only rows with a nonzero weight
/// enter the fit. sigma2 is the residual sum of squares over (m - p), m the
/// number of selected rows, and is exactly zero when that sum is below 1e-20.
/// Throws SingularError when the selected design is rank deficient.
OlsFit ols_fit(const Matrix& x, const Vector& y, const Vector* weights = nullptr);

/// Least squares restricted to the listed rows.
OlsFit ols_fit_rows(const Matrix& x, const Vector& y, const std::vector<int>& rows);

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double q);

/// Regularized lower incomplete gamma function P(a, x).
double regularized_gamma_p(double a, double x);

/// CDF of the chi-squared distribution with `dof` degrees of freedom.
double chisq_cdf(double x, int dof);

/// Quantile of the chi-squared distribution with `dof` degrees of freedom.
double chisq_quantile(double q, int dof);

} // namespace fastrcs
