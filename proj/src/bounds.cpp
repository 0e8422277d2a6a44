#include "palsim/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace palsim {

double chernoff_phi(double x) {
    if (x < -1.0) throw std::domain_error("phi(x) undefined for x < -1");
    if (x == -1.0) return 1.0;
    if (x == 0.0) return 0.0;
    return (1.0 + x) * std::log1p(x) - x;
}

TailBound chernoff_upper(double mu, double t) {
    if (mu <= 0 || t < 0) throw std::domain_error("chernoff_upper needs mu>0, t>=0");
    return {std::exp(-mu * chernoff_phi(t / mu)),
            std::exp(-t * t / (2.0 * (mu + t / 3.0)))};
}

TailBound chernoff_lower(double mu, double t) {
    if (mu <= 0 || t < 0) throw std::domain_error("chernoff_lower needs mu>0, t>=0");
    if (-t / mu < -1.0)
        throw std::domain_error("chernoff_lower: t/mu exceeds 1");
    return {std::exp(-mu * chernoff_phi(-t / mu)), std::exp(-t * t / (2.0 * mu))};
}

double large_dev_bound(double mu, double bigk) {
    if (mu <= 0 || bigk <= 0)
        throw std::domain_error("large_dev_bound needs mu>0, K>0");
    return std::exp(-bigk * mu * std::log(bigk / std::exp(1.0)));
}

double janson_bound(const std::vector<std::vector<int>>& event_sets, double p) {
    if (p <= 0.0 || p >= 1.0) throw std::domain_error("janson_bound needs p in (0,1)");
    const std::size_t m = event_sets.size();
    double mu = 0.0;
    for (const auto& a : event_sets) {
        if (a.empty()) throw std::domain_error("janson_bound: empty event set");
        mu += std::pow(p, static_cast<double>(a.size()));
    }
    auto intersects = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j])
                ++i;
            else if (a[i] > b[j])
                ++j;
            else
                return true;
        }
        return false;
    };
    auto union_size = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::size_t i = 0, j = 0, u = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j])
                ++i;
            else if (a[i] > b[j])
                ++j;
            else {
                ++i;
                ++j;
            }
            ++u;
        }
        return u + (a.size() - i) + (b.size() - j);
    };
    double delta_bar = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (intersects(event_sets[i], event_sets[j]))
                delta_bar += std::pow(
                    p, static_cast<double>(union_size(event_sets[i], event_sets[j])));
    return std::exp(-mu * mu / delta_bar);
}

bool lll_check(double p, double max_dependency_degree) {
    if (p < 0.0 || p > 1.0 || max_dependency_degree < 0)
        throw std::domain_error("lll_check needs p in [0,1], degree >= 0");
    return std::exp(1.0) * p * (max_dependency_degree + 1.0) < 1.0;
}

Rational DiscreteDistribution::mean() const {
    Rational m = 0;
    for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * prob[i];
    return m;
}

Rational DiscreteDistribution::truncated_mean(const Rational& b) const {
    Rational m = 0;
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] <= b) m += support[i] * prob[i];
    return m;
}

bool DiscreteDistribution::valid() const {
    Rational total = 0;
    for (const auto& q : prob) {
        if (q < 0 || q > 1) return false;
        total += q;
    }
    return total == 1;
}

DiscreteDistribution cvx_extremal_Z(const Rational& alpha, const Rational& beta,
                                    const Rational& a, const Rational& b) {
    if (!(0 <= beta && beta <= alpha))
        throw std::domain_error("cvx_extremal_Z needs 0 <= beta <= alpha");
    if (!(0 < b && b <= a))
        throw std::domain_error("cvx_extremal_Z needs 0 < b <= a");

    DiscreteDistribution z;
    if (b == a) {
        if (alpha != beta)
            throw std::domain_error(
                "cvx_extremal_Z infeasible: b == a forces alpha == beta");
        const Rational pa = alpha / a;
        if (pa > 1) throw std::domain_error("cvx_extremal_Z infeasible: alpha > a");
        z.support = {Rational(0), a};
        z.prob = {1 - pa, pa};
    } else {
        const Rational pb = beta / b;
        const Rational pa = (alpha - beta) / a;
        if (pb + pa > 1)
            throw std::domain_error(
                "cvx_extremal_Z infeasible: beta/b + (alpha-beta)/a > 1");
        z.support = {Rational(0), b, a};
        z.prob = {1 - pb - pa, pb, pa};
    }

    if (!z.valid() || z.mean() != alpha || z.truncated_mean(b) != beta)
        throw std::logic_error("cvx_extremal_Z moment identity violated");
    return z;
}

}  // namespace palsim
