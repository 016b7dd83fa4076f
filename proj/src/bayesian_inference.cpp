#include "qres/bayesian_inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "qres/core_linalg.hpp"

namespace qres {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

double log2_ratio_term(double mass, double ratio) {
    // 0 log 0 := 0
    if (ratio <= 0.0) return 0.0;
    return mass * ratio * std::log2(ratio);
}

std::vector<std::vector<double>> tabulate(const Prior& prior, const Likelihood& lik) {
    std::vector<std::vector<double>> rows;
    rows.reserve(prior.points().size());
    for (double a : prior.points()) rows.push_back(lik(a));
    return rows;
}

std::vector<double> marginals(const Prior& prior, const std::vector<std::vector<double>>& rows,
                              std::size_t n_out) {
    std::vector<double> p(n_out, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < n_out; ++k) p[k] += prior.masses()[i] * rows[i][k];
    return p;
}

}  // namespace

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
    nodes_.resize(n);
    weights_.resize(n);
    if (n == 1) {
        nodes_[0] = 0.0;
        weights_[0] = 2.0;
        return;
    }
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, d] = legendre(n, x);
            dp = d;
            const double dx = p / d;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Ascending order: negative root first.
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

const GaussLegendre& GaussLegendre::cached(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendre>> rules;
    std::lock_guard lock(mutex);
    auto& slot = rules[n];
    if (!slot) slot = std::make_unique<GaussLegendre>(n);
    return *slot;
}

double integrate(const std::function<double(double)>& f, double a, double b, int nodes) {
    const auto& rule = GaussLegendre::cached(nodes);
    const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
    double sum = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        const double v = f(mid + half * rule.nodes()[i]);
        if (!std::isfinite(v)) throw NumericalError("integrate: integrand is not finite");
        sum += rule.weights()[i] * v;
    }
    return half * sum;
}

Prior Prior::continuous(Density density, double lo, double hi, int nodes) {
    if (!(hi > lo)) throw std::invalid_argument("prior domain must satisfy lo < hi");
    Prior p;
    p.density_ = std::move(density);
    p.lo_ = lo;
    p.hi_ = hi;
    p.nodes_ = nodes;
    const auto& rule = GaussLegendre::cached(nodes);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    p.points_.reserve(nodes);
    p.masses_.reserve(nodes);
    for (int i = 0; i < rule.size(); ++i) {
        const double a = mid + half * rule.nodes()[i];
        const double d = p.density_(a);
        if (!std::isfinite(d) || d < 0.0) throw NumericalError("prior density must be finite and non-negative");
        p.points_.push_back(a);
        p.masses_.push_back(half * rule.weights()[i] * d);
    }
    const double total = std::accumulate(p.masses_.begin(), p.masses_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw NumericalError("prior density does not integrate to 1");
    return p;
}

Prior Prior::discrete(std::vector<double> points, std::vector<double> weights) {
    if (points.empty() || points.size() != weights.size())
        throw std::invalid_argument("discrete prior needs matching non-empty points and weights");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("discrete prior weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("discrete prior weights must sum to 1");
    Prior p;
    p.discrete_ = true;
    p.lo_ = *std::min_element(points.begin(), points.end());
    p.hi_ = *std::max_element(points.begin(), points.end());
    p.points_ = std::move(points);
    p.masses_ = std::move(weights);
    return p;
}

Prior Prior::half_sine(int nodes) {
    return continuous([](double a) { return 0.5 * std::sin(a); }, 0.0, M_PI, nodes);
}

Prior Prior::parallel_antiparallel() { return discrete({0.0, M_PI}, {0.5, 0.5}); }

double Prior::density(double alpha) const {
    if (!discrete_) return (alpha < lo_ || alpha > hi_) ? 0.0 : density_(alpha);
    for (std::size_t k = 0; k < points_.size(); ++k)
        if (points_[k] == alpha) return masses_[k];
    return 0.0;
}

std::size_t OutcomeDistribution::index_of(const std::string& label) const {
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == label) return k;
    throw std::invalid_argument("unknown outcome label '" + label + "'");
}

double OutcomeDistribution::at(const std::string& label) const { return probs[index_of(label)]; }

Likelihood::Likelihood(std::vector<std::string> outcomes, Function f)
    : outcomes_(std::move(outcomes)), f_(std::move(f)) {
    if (outcomes_.empty()) throw std::invalid_argument("likelihood needs at least one outcome");
}

std::size_t Likelihood::index_of(const std::string& label) const {
    for (std::size_t k = 0; k < outcomes_.size(); ++k)
        if (outcomes_[k] == label) return k;
    throw std::invalid_argument("unknown outcome label '" + label + "'");
}

std::vector<double> Likelihood::operator()(double alpha) const {
    std::vector<double> p = f_(alpha);
    if (p.size() != outcomes_.size()) throw NumericalError("likelihood returned the wrong number of outcomes");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) throw NumericalError("likelihood entry outside [0, 1]");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-10) throw NumericalError("likelihood does not sum to 1");
    for (double& v : p) v = std::clamp(v, 0.0, 1.0);
    return p;
}

OutcomeDistribution outcome_marginal(const Prior& prior, const Likelihood& lik) {
    const auto rows = tabulate(prior, lik);
    auto p = marginals(prior, rows, lik.outcomes().size());
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw NumericalError("outcome marginal is not normalized");
    for (double& v : p) v /= total;
    return {lik.outcomes(), std::move(p)};
}

Prior posterior(const Prior& prior, const Likelihood& lik, const std::string& outcome) {
    const std::size_t k = lik.index_of(outcome);
    const double p_out = outcome_marginal(prior, lik).probs[k];
    if (p_out <= kImpossibleOutcome)
        throw std::domain_error("posterior: conditioning on an outcome of zero probability ('" + outcome + "')");

    if (prior.is_discrete()) {
        std::vector<double> w;
        w.reserve(prior.points().size());
        for (std::size_t i = 0; i < prior.points().size(); ++i)
            w.push_back(prior.masses()[i] * lik(prior.points()[i])[k] / p_out);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& v : w) v /= total;
        return Prior::discrete(prior.points(), std::move(w));
    }
    auto density = [prior, lik, k, p_out](double a) { return prior.density(a) * lik(a)[k] / p_out; };
    return Prior::continuous(std::move(density), prior.lo(), prior.hi(), prior.nodes());
}

double information_gain(const Prior& prior, const Likelihood& lik, const std::string& outcome) {
    const std::size_t k = lik.index_of(outcome);
    const auto rows = tabulate(prior, lik);
    const double p_out = marginals(prior, rows, lik.outcomes().size())[k];
    if (p_out <= kImpossibleOutcome)
        throw std::domain_error("information_gain: outcome '" + outcome + "' has zero probability");
    double sum = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) sum += log2_ratio_term(prior.masses()[i], rows[i][k] / p_out);
    return sum;
}

double average_information_gain(const Prior& prior, const Likelihood& lik) {
    const std::size_t n_out = lik.outcomes().size();
    const auto rows = tabulate(prior, lik);
    const auto p = marginals(prior, rows, n_out);
    double avg = 0.0;
    for (std::size_t k = 0; k < n_out; ++k) {
        if (p[k] <= kImpossibleOutcome) continue;
        double gain = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) gain += log2_ratio_term(prior.masses()[i], rows[i][k] / p[k]);
        avg += p[k] * gain;
    }
    return avg;
}

}  // namespace qres
