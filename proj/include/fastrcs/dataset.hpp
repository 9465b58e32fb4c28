#pragma once

#include "fastrcs/numkit.hpp"

#include <optional>
#include <vector>

namespace fastrcs {

/// Observation indices, kept sorted ascending.
using IndexSet = std::vector<int>;

/// Response `y` regressed on predictors `x` (n rows, p - 1 columns) plus an intercept.
struct Dataset {
    Matrix x;
    Vector y;

    Dataset() = default;
    Dataset(Matrix predictors, Vector response);

    Index n() const { return y.size(); }
    /// Model dimension: predictors plus intercept.
    Index p() const { return x.cols() + 1; }
};

/// Regression hyperplane y = a + x'b.
struct Hyperplane {
    double intercept = 0.0;
    Vector slopes;

    Hyperplane() = default;
    Hyperplane(double a, Vector b) : intercept(a), slopes(std::move(b)) {}
    /// From a stacked coefficient vector (intercept first).
    static Hyperplane from_coefficients(const Vector& theta);
    Vector coefficients() const;
};

/// Size of the subset assumed clean: ceil((n+p+1)/2) at alpha = 0.5,
/// growing linearly to n as alpha approaches 1.
int subset_size_h(Index n, Index p, double alpha);

/// Hyperplane through exactly p observations; nullopt when they are affinely degenerate.
std::optional<Hyperplane> try_exact_hyperplane(const Dataset& data, const std::vector<int>& rows);

/// Hyperplane through p points given as rows of `x` and entries of `y`.
/// Throws SingularError when the points are affinely degenerate.
Hyperplane exact_hyperplane(const Matrix& x, const Vector& y);

/// |y_i - a - x_i'b| for every observation.
Vector residual_distances(const Hyperplane& plane, const Dataset& data);

/// Same as residual_distances, squared.
Vector squared_residuals(const Hyperplane& plane, const Dataset& data);

/// Indices of the h smallest entries; ties at the boundary go to the smaller index.
IndexSet h_smallest(const Vector& values, int h);

/// Sum of the h smallest entries.
double sum_of_h_smallest(const Vector& values, int h);

/// Complement of `set` in {0, ..., n-1}.
IndexSet complement(const IndexSet& set, Index n);

} // namespace fastrcs
