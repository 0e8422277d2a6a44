#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace palsim {

using Rational = boost::multiprecision::cpp_rational;

// phi(x) = (1+x)log(1+x) - x for x > -1, phi(-1) = 1.
double chernoff_phi(double x);

struct TailBound {
    double phi_form;        // exp[-mu * phi(+-t/mu)]
    double quadratic_form;  // exp[-t^2/(2(mu+t/3))] resp. exp[-t^2/(2mu)]
};

// P(xi >= mu + t) bounds for binomial/hypergeometric xi with mean mu.
TailBound chernoff_upper(double mu, double t);
// P(xi <= mu - t) bounds; requires t <= mu (else phi(-t/mu) leaves its domain).
TailBound chernoff_lower(double mu, double t);

// P(xi > K*mu) < exp[-K mu log(K/e)].
double large_dev_bound(double mu, double bigk);

// Simplest Janson bound. Events E_i = {S_p contains A_i} for subsets A_i of
// a ground set, each element kept independently with probability p.
// Returns exp[-mu^2 / Delta-bar] with mu = sum p^{|A_i|} and
// Delta-bar = sum over intersecting (ordered) pairs, diagonal included,
// of p^{|A_i u A_j|}.
double janson_bound(const std::vector<std::vector<int>>& event_sets, double p);

// Symmetric local lemma feasibility: e * p * (dep_degree + 1) < 1.
bool lll_check(double p, double max_dependency_degree);

// Finitely supported distribution on [0, a] with exact rational weights.
struct DiscreteDistribution {
    std::vector<Rational> support;
    std::vector<Rational> prob;

    Rational mean() const;
    // E[Z * 1{Z <= b}]
    Rational truncated_mean(const Rational& b) const;
    bool valid() const;  // probs in [0,1], sum exactly 1
};

// The three-point extremal distribution of the convexity bound:
// P(Z=b) = beta/b, P(Z=a) = (alpha-beta)/a, remainder at 0.
// Requires 0 <= beta <= alpha, 0 < b <= a; throws if the weights are
// infeasible (sum > 1, or b == a with alpha != beta).
DiscreteDistribution cvx_extremal_Z(const Rational& alpha, const Rational& beta,
                                    const Rational& a, const Rational& b);

}  // namespace palsim
