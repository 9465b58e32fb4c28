#include "fastrcs/dataset.hpp"

#include <numeric>
#include <stdexcept>

namespace fastrcs {

Dataset::Dataset(Matrix predictors, Vector response)
    : x(std::move(predictors)), y(std::move(response))
{
    if (x.rows() != y.size())
        throw std::invalid_argument("Dataset: predictors and response disagree on the number of rows");
    if (x.cols() < 1)
        throw std::invalid_argument("Dataset: at least one predictor is required");
    if (n() <= p())
        throw std::invalid_argument("Dataset: need more observations than model dimensions");
    if (!x.allFinite() || !y.allFinite())
        throw std::invalid_argument("Dataset: non-finite value");
}

Hyperplane Hyperplane::from_coefficients(const Vector& theta)
{
    return Hyperplane(theta(0), theta.tail(theta.size() - 1));
}

Vector Hyperplane::coefficients() const
{
    Vector theta(slopes.size() + 1);
    theta << intercept, slopes;
    return theta;
}

int subset_size_h(Index n, Index p, double alpha)
{
    const Index half = (n + p + 2) / 2;
    if (alpha <= 0.5)
        return static_cast<int>(half);
    const double grown = static_cast<double>(half) + (alpha - 0.5) * 2.0 * static_cast<double>(n - half);
    const auto h = static_cast<Index>(std::floor(grown + 1e-9));
    return static_cast<int>(std::clamp(h, half, n));
}

std::optional<Hyperplane> try_exact_hyperplane(const Dataset& data, const std::vector<int>& rows)
{
    const Index p = data.p();
    if (static_cast<Index>(rows.size()) != p)
        throw std::invalid_argument("exact_hyperplane: need exactly p points");
    Matrix a(p, p);
    Vector b(p);
    for (Index r = 0; r < p; ++r) {
        const int i = rows[static_cast<std::size_t>(r)];
        a(r, 0) = 1.0;
        a.row(r).tail(p - 1) = data.x.row(i);
        b(r) = data.y(i);
    }
    auto theta = try_solve_linear(a, b);
    if (!theta)
        return std::nullopt;
    return Hyperplane::from_coefficients(*theta);
}

Hyperplane exact_hyperplane(const Matrix& x, const Vector& y)
{
    const Index p = x.cols() + 1;
    if (x.rows() != p || y.size() != p)
        throw std::invalid_argument("exact_hyperplane: need exactly p points");
    Matrix a(p, p);
    a.col(0).setOnes();
    a.rightCols(p - 1) = x;
    return Hyperplane::from_coefficients(solve_linear(a, y));
}

Vector residual_distances(const Hyperplane& plane, const Dataset& data)
{
    return ((data.y - data.x * plane.slopes).array() - plane.intercept).abs().matrix();
}

Vector squared_residuals(const Hyperplane& plane, const Dataset& data)
{
    return ((data.y - data.x * plane.slopes).array() - plane.intercept).square().matrix();
}

namespace {

std::vector<int> partition_h(const Vector& values, int h)
{
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    auto less = [&values](int a, int b) {
        return values(a) < values(b) || (values(a) == values(b) && a < b);
    };
    if (h < static_cast<int>(order.size()))
        std::nth_element(order.begin(), order.begin() + h, order.end(), less);
    order.resize(static_cast<std::size_t>(h));
    return order;
}

} // namespace

IndexSet h_smallest(const Vector& values, int h)
{
    if (h < 0 || h > values.size())
        throw std::out_of_range("h_smallest: h exceeds the number of values");
    IndexSet out = partition_h(values, h);
    std::sort(out.begin(), out.end());
    return out;
}

double sum_of_h_smallest(const Vector& values, int h)
{
    if (h < 0 || h > values.size())
        throw std::out_of_range("sum_of_h_smallest: h exceeds the number of values");
    std::vector<double> buf(values.data(), values.data() + values.size());
    if (h < static_cast<int>(buf.size()))
        std::nth_element(buf.begin(), buf.begin() + h, buf.end());
    return std::accumulate(buf.begin(), buf.begin() + h, 0.0);
}

IndexSet complement(const IndexSet& set, Index n)
{
    std::vector<char> member(static_cast<std::size_t>(n), 0);
    for (int i : set)
        member[static_cast<std::size_t>(i)] = 1;
    IndexSet out;
    for (Index i = 0; i < n; ++i)
        if (!member[static_cast<std::size_t>(i)])
            out.push_back(static_cast<int>(i));
    return out;
}

} // namespace fastrcs
