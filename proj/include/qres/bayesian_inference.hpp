// bayesian_inference.hpp
// Priors over a scalar task parameter, outcome likelihoods, Bayesian
// posteriors and information gain (bits), evaluated with fixed-order
// Gauss-Legendre quadrature so every number is reproducible bit for bit.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qres {

inline constexpr int kDefaultQuadratureNodes = 512;

/// Outcomes whose marginal probability is at or below this are treated as
/// impossible.
inline constexpr double kImpossibleOutcome = 1e-14;

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    /// Shared, lazily built rule; safe to call from several threads.
    static const GaussLegendre& cached(int n);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// ∫_a^b f. Throws NumericalError if f is non-finite at a node.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int nodes = kDefaultQuadratureNodes);

/// Probability distribution over the task parameter alpha.
///
/// Every prior is reduced to a weighted point set (its support): the
/// quadrature nodes with weight w_i p(alpha_i) for a density, or the atoms
/// themselves for a discrete prior. All expectations are sums over it.
class Prior {
public:
    using Density = std::function<double(double)>;

    /// Density per radian on [lo, hi]; must integrate to 1 within 1e-9.
    static Prior continuous(Density density, double lo, double hi,
                            int nodes = kDefaultQuadratureNodes);

    /// Atoms alpha_k with weights p_k >= 0 summing to 1 within 1e-12.
    static Prior discrete(std::vector<double> points, std::vector<double> weights);

    /// p(alpha) = sin(alpha) / 2 on [0, pi]: the polar angle of a uniformly
    /// random direction.
    static Prior half_sine(int nodes = kDefaultQuadratureNodes);

    /// Equal weight on alpha = 0 and alpha = pi.
    static Prior parallel_antiparallel();

    bool is_discrete() const { return discrete_; }
    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& masses() const { return masses_; }

    /// Density at alpha (continuous) or atom weight (discrete, 0 off-atom).
    double density(double alpha) const;

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int nodes() const { return nodes_; }

private:
    Prior() = default;

    bool discrete_ = false;
    Density density_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    int nodes_ = 0;
    std::vector<double> points_;
    std::vector<double> masses_;
};

struct OutcomeDistribution {
    std::vector<std::string> labels;
    std::vector<double> probs;

    double at(const std::string& label) const;
    std::size_t index_of(const std::string& label) const;
};

/// P(outcome | alpha) for a fixed list of outcome labels.
class Likelihood {
public:
    using Function = std::function<std::vector<double>(double)>;

    Likelihood(std::vector<std::string> outcomes, Function f);

    const std::vector<std::string>& outcomes() const { return outcomes_; }
    std::size_t index_of(const std::string& label) const;

    /// Evaluates and checks the distribution: entries in [0, 1] and summing
    /// to 1 within 1e-10, otherwise NumericalError.
    std::vector<double> operator()(double alpha) const;

private:
    std::vector<std::string> outcomes_;
    Function f_;
};

OutcomeDistribution outcome_marginal(const Prior& prior, const Likelihood& lik);

/// Posterior given an observed outcome. Same kind as the prior.
Prior posterior(const Prior& prior, const Likelihood& lik, const std::string& outcome);

/// KL divergence (bits) of the posterior from the prior, computed in the
/// likelihood-ratio form ∫ p(a|o) log2(P(o|a)/p(o)).
double information_gain(const Prior& prior, const Likelihood& lik, const std::string& outcome);

/// Σ_o p(o) I_o over outcomes with p(o) > kImpossibleOutcome.
double average_information_gain(const Prior& prior, const Likelihood& lik);

}  // namespace qres
