#include "fastrcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace fastrcs {

double bias(const Vector& theta_hat)
{
    return theta_hat.norm();
}

double mis_rate(const IndexSet& outliers, const IndexSet& h_plus)
{
    if (outliers.empty())
        return 0.0;
    std::size_t hits = 0;
    for (int i : outliers)
        if (std::binary_search(h_plus.begin(), h_plus.end(), i))
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(outliers.size());
}

double lower_percentile(std::vector<double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("lower_percentile: no values");
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1) + 1e-9));
    return values[std::min(rank, values.size() - 1)];
}

std::vector<CurveSummary> summarize(const std::vector<CurvePoint>& points)
{
    if (points.empty())
        return {};
    auto key = [](const auto& c) {
        return std::make_tuple(c.algorithm, c.configuration, c.p, c.epsilon, c.d_x, c.alpha, c.nu);
    };
    std::map<decltype(key(points.front())), std::size_t> slot;

    std::vector<CurveSummary> groups;
    std::vector<std::vector<double>> biases;
    std::vector<std::vector<double>> rates;
    for (const CurvePoint& pt : points) {
        auto [it, fresh] = slot.try_emplace(key(pt), groups.size());
        const std::size_t g = it->second;
        if (fresh) {
            CurveSummary s;
            s.algorithm = pt.algorithm;
            s.configuration = pt.configuration;
            s.p = pt.p;
            s.epsilon = pt.epsilon;
            s.d_x = pt.d_x;
            s.alpha = pt.alpha;
            s.nu = pt.nu;
            groups.push_back(s);
            biases.emplace_back();
            rates.emplace_back();
        }
        biases[g].push_back(pt.bias);
        rates[g].push_back(pt.mis_rate);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        groups[g].replications = static_cast<int>(biases[g].size());
        groups[g].bias_median = lower_percentile(biases[g], 0.5);
        groups[g].bias_p75 = lower_percentile(biases[g], 0.75);
        groups[g].mis_rate_median = lower_percentile(rates[g], 0.5);
        groups[g].mis_rate_p75 = lower_percentile(rates[g], 0.75);
    }
    return groups;
}

} // namespace fastrcs
