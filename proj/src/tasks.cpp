#include "qres/tasks.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qres {

namespace {

const std::vector<std::string> kSpinOutcomes{"00", "01", "10", "11"};
const std::vector<std::string> kSrfOutcomes{"++", "+-", "-+", "--"};
const std::vector<std::string> kTask3Hypotheses{"psi-", "m,m"};
const std::vector<std::string> kTask2Hypotheses{"parallel", "anti-parallel"};

const PairProjectors& qubit_projectors() {
    static const PairProjectors p = total_spin_projectors_qubits();
    return p;
}

const StateVector& psi_minus() {
    static const StateVector s = singlet(SpinJ::half());
    return s;
}

// |z±><z±| on one qubit.
Operator z_projector(int sign) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(sign > 0 ? 0 : 1, sign > 0 ? 0 : 1) = 1.0;
    return Operator(std::move(m));
}

std::array<Operator, 2> z_measurement() { return {z_projector(+1), z_projector(-1)}; }

std::array<Operator, 2> total_spin_measurement() {
    return {qubit_projectors().lower.op(), qubit_projectors().upper.op()};
}

// Four outcome probabilities of two local two-outcome measurements, with
// `left` on the leading factors of `state`.
std::array<double, 4> local_table(const StateVector& state, const std::array<Operator, 2>& left,
                                  const std::array<Operator, 2>& right) {
    std::array<double, 4> p{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) p[2 * a + b] = local_prob(state, left[a], right[b]);
    return p;
}

// Shared two-qubit resource held as (B, C) and a sent pair (1, 2); Bob
// measures (B, 1) and Charlie (C, 2).
std::array<double, 4> shared_pair_table(const StateVector& shared, const StateVector& sent,
                                        const std::array<Operator, 2>& measurement) {
    static constexpr int kOrder[] = {0, 2, 1, 3};
    return local_table(permute_factors(tensor(shared, sent), kOrder), measurement, measurement);
}

OutcomeTable make_table(const std::vector<std::string>& outcomes, const std::vector<std::string>& hyps,
                        const std::array<double, 4>& first, const std::array<double, 4>& second) {
    OutcomeTable t{outcomes, hyps, {}};
    for (std::size_t k = 0; k < 4; ++k) t.probs.push_back({first[k], second[k]});
    return t;
}

// ∫_0^pi f(theta) sin(theta)/2 dtheta
template <typename F>
double sphere_average(F&& f, int nodes) {
    const auto& rule = GaussLegendre::cached(nodes);
    const double half = 0.5 * M_PI;
    double sum = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        const double theta = half + half * rule.nodes()[i];
        sum += half * rule.weights()[i] * 0.5 * std::sin(theta) * f(theta);
    }
    return sum;
}

StateVector parallel_pair(const Direction& m) { return tensor(m.up(), m.up()); }

void require_sss_half(const Resource& r, const char* what) {
    if (r.kind == Resource::Kind::sss && r.j != SpinJ::half())
        throw std::invalid_argument(std::string(what) + " is defined for the spin-1/2 singlet only");
}

[[noreturn]] void unsupported(const Resource& r, const char* task, const char* valid) {
    throw std::invalid_argument(std::string(task) + " does not support resource '" + r.name() +
                                "'; valid resources: " + valid);
}

}  // namespace

std::string Resource::name() const {
    switch (kind) {
        case Kind::srf: return "srf";
        case Kind::sss: return "sss";
        case Kind::refbit: return "refbit";
    }
    return "?";
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::avg_info_bits: return "avg_info_bits";
        case Metric::conclusive_prob: return "conclusive_prob";
        case Metric::inconclusive_prob: return "inconclusive_prob";
        case Metric::conclusive_prob_given_antiparallel: return "conclusive_prob_given_antiparallel";
    }
    return "?";
}

std::vector<double> OutcomeTable::column(std::size_t hypothesis) const {
    std::vector<double> c;
    c.reserve(probs.size());
    for (const auto& row : probs) c.push_back(row[hypothesis]);
    return c;
}

double OutcomeTable::max_column_defect() const {
    double worst = 0.0;
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
        double s = 0.0;
        for (const auto& row : probs) s += row[h];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

StateVector Direction::up() const { return bloch_ket(theta, phi); }

StateVector Direction::down() const { return opposite().up(); }

Direction Direction::opposite() const { return {M_PI - theta, phi + M_PI}; }

std::array<double, 3> Direction::cartesian() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double conclusive_probability(const OutcomeTable& table, std::span<const double> hypothesis_priors) {
    if (hypothesis_priors.size() != table.hypotheses.size())
        throw std::invalid_argument("conclusive_probability: one prior per hypothesis required");
    double total = 0.0;
    for (const auto& row : table.probs) {
        int possible = 0;
        double weighted = 0.0;
        for (std::size_t h = 0; h < row.size(); ++h) {
            if (row[h] >= kZeroProbability) ++possible;
            weighted += hypothesis_priors[h] * row[h];
        }
        if (possible == 1) total += weighted;
    }
    return total;
}

// ---------------------------------------------------------------- Task I

Likelihood task1_likelihood_sss() {
    return Likelihood(kSpinOutcomes, [](double alpha) {
        if (!(alpha >= 0.0 && alpha <= M_PI)) throw std::domain_error("task I: alpha must lie in [0, pi]");
        const double s = std::pow(std::sin(alpha / 2), 2) / 8.0;
        return std::vector<double>{s, 0.25 - s, 0.25 - s, 0.5 + s};
    });
}

std::array<double, 4> task1_probs_sss_constructive(double alpha, double phi) {
    const StateVector chi = tensor(tensor(bloch_ket(0.0, 0.0), psi_minus()), bloch_ket(alpha, phi));
    const auto m = total_spin_measurement();
    return local_table(chi, m, m);
}

Likelihood srf_likelihood(int nodes) {
    return Likelihood(kSrfOutcomes, [nodes](double alpha) {
        // Averaging the second spin's azimuth about the first turns its z
        // component into cos(alpha) cos(theta1).
        const double c = std::cos(alpha);
        std::vector<double> p;
        p.reserve(4);
        for (int a : {+1, -1})
            for (int b : {+1, -1})
                p.push_back(sphere_average(
                    [=](double t) { return 0.25 * (1.0 + a * std::cos(t)) * (1.0 + b * c * std::cos(t)); },
                    nodes));
        return p;
    });
}

TaskResult task1_avg_info(const Resource& resource, int nodes) {
    const Prior prior = Prior::half_sine(nodes);
    TaskResult r{1, resource, std::nullopt, Metric::avg_info_bits, 0.0, std::nullopt};
    switch (resource.kind) {
        case Resource::Kind::srf:
            r.value = average_information_gain(prior, srf_likelihood(nodes));
            break;
        case Resource::Kind::sss:
            require_sss_half(resource, "task1");
            r.parameter = resource.j.value();
            r.value = average_information_gain(prior, task1_likelihood_sss());
            break;
        default:
            unsupported(resource, "task1", "srf, sss (j=1/2)");
    }
    return r;
}

// ---------------------------------------------------------------- Task II

Task2Probs task2_probs_closed_form(SpinJ j) {
    const double jv = j.value();
    const double d = 3.0 * (1.0 + 2.0 * jv) * (1.0 + 2.0 * jv);
    const double par_ll = jv * (2.0 * jv - 1.0) / d;
    const double par_lu = 4.0 * jv * (1.0 + jv) / d;
    const double par_uu = (1.0 + jv) * (3.0 + 2.0 * jv) / d;
    const double anti_ll = jv * (1.0 + 4.0 * jv) / d;
    const double anti_lu = 2.0 * jv * (1.0 + jv) / d;
    const double anti_uu = (1.0 + jv) * (3.0 + 4.0 * jv) / d;
    return {{par_ll, par_lu, par_lu, par_uu}, {anti_ll, anti_lu, anti_lu, anti_uu}};
}

Task2Probs task2_probs_constructive(SpinJ j) {
    const int d = j.dim();
    const StateVector shared = singlet(j);
    const auto proj = total_spin_projectors_pair(j);
    const std::array<Operator, 2> meas{proj.lower.op(), proj.upper.op()};

    // Layout (1, B, 2, C): each side's spin-1/2 ahead of its spin-j, matching
    // the pair projector layout.
    auto build = [&](int charlie_spin) {
        CVector v = CVector::Zero(static_cast<Eigen::Index>(4) * d * d);
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
                const Complex amp = shared[b * d + c];
                if (amp == Complex(0.0)) continue;
                // Bob's received spin is z+ (index 0).
                v[(0 * d + b) * 2 * d + charlie_spin * d + c] = amp;
            }
        return StateVector(std::move(v), {2, d, 2, d});
    };
    return {local_table(build(0), meas, meas), local_table(build(1), meas, meas)};
}

Likelihood task2_likelihood_sss(SpinJ j) {
    const Task2Probs p = task2_probs_closed_form(j);
    return Likelihood(kSpinOutcomes, [p](double alpha) {
        if (std::abs(alpha) < 1e-12) return std::vector<double>(p.parallel.begin(), p.parallel.end());
        if (std::abs(alpha - M_PI) < 1e-12)
            return std::vector<double>(p.antiparallel.begin(), p.antiparallel.end());
        throw std::domain_error("task II likelihood is defined at alpha = 0 and alpha = pi only");
    });
}

TaskResult task2_avg_info(const Resource& resource, int nodes) {
    const Prior prior = Prior::parallel_antiparallel();
    TaskResult r{2, resource, std::nullopt, Metric::avg_info_bits, 0.0, std::nullopt};
    switch (resource.kind) {
        case Resource::Kind::srf:
            r.value = average_information_gain(prior, srf_likelihood(nodes));
            break;
        case Resource::Kind::sss:
            if (resource.j.twice_j() < 1) throw std::invalid_argument("task2: singlet spin must be at least 1/2");
            r.parameter = resource.j.value();
            r.value = average_information_gain(prior, task2_likelihood_sss(resource.j));
            break;
        default:
            unsupported(resource, "task2", "srf, sss");
    }
    return r;
}

std::vector<TaskResult> task2_spinj_sweep(std::span<const SpinJ> j_values) {
    if (j_values.empty()) throw std::invalid_argument("sweep needs at least one spin value");
    std::vector<TaskResult> out;
    out.reserve(j_values.size());
    for (SpinJ j : j_values) out.push_back(task2_avg_info(Resource::sss(j)));
    return out;
}

Task2Conclusive task2_conclusive(const Resource& resource, std::uint64_t seed, int samples) {
    static constexpr double kPriors[] = {0.5, 0.5};
    Task2Conclusive out{};
    out.averaged = {2, resource, std::nullopt, Metric::conclusive_prob, 0.0, std::nullopt};
    out.given_antiparallel = {2, resource, std::nullopt, Metric::conclusive_prob_given_antiparallel, 0.0, std::nullopt};

    auto given_anti = [](const OutcomeTable& t) {
        double s = 0.0;
        for (const auto& row : t.probs)
            if (row[0] < kZeroProbability && row[1] >= kZeroProbability) s += row[1];
        return s;
    };

    if (resource.kind == Resource::Kind::sss) {
        const Task2Probs p = task2_probs_closed_form(resource.j);
        const OutcomeTable t = make_table(kSpinOutcomes, kTask2Hypotheses, p.parallel, p.antiparallel);
        out.averaged.parameter = out.given_antiparallel.parameter = resource.j.value();
        out.averaged.value = conclusive_probability(t, kPriors);
        out.given_antiparallel.value = given_anti(t);
        out.averaged.outcome_table = t;
        return out;
    }
    if (resource.kind != Resource::Kind::srf) unsupported(resource, "task2 conclusive", "srf, sss");

    std::mt19937_64 rng(seed);
    const double cmax = std::cos(0.1);
    std::uniform_real_distribution<double> cos_theta(-cmax, cmax);
    std::uniform_real_distribution<double> azimuth(0.0, 2.0 * M_PI);
    const auto z = z_measurement();
    double min_p = 1.0, sum = 0.0, sum_anti = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Direction m{std::acos(cos_theta(rng)), azimuth(rng)};
        const auto par = local_table(tensor(m.up(), m.up()), z, z);
        const auto anti = local_table(tensor(m.up(), m.down()), z, z);
        const OutcomeTable t = make_table(kSrfOutcomes, kTask2Hypotheses, par, anti);
        for (const auto& row : t.probs) min_p = std::min({min_p, row[0], row[1]});
        sum += conclusive_probability(t, kPriors);
        sum_anti += given_anti(t);
    }
    out.averaged.value = sum / samples;
    out.given_antiparallel.value = sum_anti / samples;
    out.min_outcome_probability = min_p;
    out.sampled_directions = samples;

    const Likelihood lik = srf_likelihood();
    const auto par = lik(0.0), anti = lik(M_PI);
    out.averaged.outcome_table = make_table(kSrfOutcomes, kTask2Hypotheses, {par[0], par[1], par[2], par[3]},
                                            {anti[0], anti[1], anti[2], anti[3]});
    return out;
}

// ---------------------------------------------------------------- Task III

OutcomeTable task3_table(const Resource& resource, const Direction& m) {
    const StateVector mm = parallel_pair(m);
    switch (resource.kind) {
        case Resource::Kind::srf: {
            const auto z = z_measurement();
            return make_table(kSrfOutcomes, kTask3Hypotheses, local_table(psi_minus(), z, z), local_table(mm, z, z));
        }
        case Resource::Kind::sss: {
            require_sss_half(resource, "task3");
            const auto meas = total_spin_measurement();
            return make_table(kSpinOutcomes, kTask3Hypotheses, shared_pair_table(psi_minus(), psi_minus(), meas),
                              shared_pair_table(psi_minus(), mm, meas));
        }
        case Resource::Kind::refbit: {
            const StateVector refbit = parallel_pair(Direction{0.0, 0.0});
            const auto meas = total_spin_measurement();
            return make_table(kSpinOutcomes, kTask3Hypotheses, shared_pair_table(refbit, psi_minus(), meas),
                              shared_pair_table(refbit, mm, meas));
        }
    }
    throw std::logic_error("unreachable");
}

OutcomeTable task3_table_closed_form(const Resource& resource, double theta) {
    const double c = std::pow(std::cos(theta / 2), 2);
    const double s = std::pow(std::sin(theta / 2), 2);
    switch (resource.kind) {
        case Resource::Kind::srf:
            return make_table(kSrfOutcomes, kTask3Hypotheses, {0.0, 0.5, 0.5, 0.0}, {c * c, c * s, c * s, s * s});
        case Resource::Kind::sss:
            require_sss_half(resource, "task3");
            return make_table(kSpinOutcomes, kTask3Hypotheses, {0.25, 0.0, 0.0, 0.75}, {0.0, 0.25, 0.25, 0.5});
        case Resource::Kind::refbit: {
            const double mixed = 0.25 * s * s + 0.5 * s * c;
            return make_table(kSpinOutcomes, kTask3Hypotheses, {0.0, 0.25, 0.25, 0.5},
                              {0.25 * s * s, mixed, mixed, 0.25 * s * s + s * c + c * c});
        }
    }
    throw std::logic_error("unreachable");
}

Task3Tables task3_tables(const Resource& resource, int nodes) {
    Task3Tables out;
    out.at = [resource](double theta) { return task3_table(resource, Direction{theta, 0.0}); };
    OutcomeTable avg = out.at(M_PI / 2);
    for (std::size_t o = 0; o < avg.probs.size(); ++o)
        for (std::size_t h = 0; h < avg.hypotheses.size(); ++h)
            avg.probs[o][h] = sphere_average([&](double t) { return out.at(t).probs[o][h]; }, nodes);
    out.sphere_average = std::move(avg);
    return out;
}

TaskResult task3_outcome_table(const Resource& resource, int nodes) {
    TaskResult r = task3_conclusive(resource, nodes);
    r.outcome_table = task3_tables(resource, nodes).sphere_average;
    return r;
}

TaskResult task3_conclusive(const Resource& resource, int nodes) {
    static constexpr double kPriors[] = {0.5, 0.5};
    TaskResult r{3, resource, std::nullopt, Metric::conclusive_prob, 0.0, std::nullopt};
    if (resource.kind == Resource::Kind::sss) r.parameter = resource.j.value();
    r.value = sphere_average(
        [&](double t) { return conclusive_probability(task3_table(resource, Direction{t, 0.0}), kPriors); }, nodes);
    return r;
}

// ------------------------------------------------ refbit measurement family

RefbitPovm::RefbitPovm(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
        throw std::domain_error("refbit POVM weights must lie in [0, 1]");
}

Operator RefbitPovm::e0() const {
    const auto& p = qubit_projectors();
    return Operator(alpha_ * p.lower.matrix() + beta_ * p.upper.matrix());
}

Operator RefbitPovm::e1() const {
    const auto& p = qubit_projectors();
    return Operator((1.0 - alpha_) * p.lower.matrix() + (1.0 - beta_) * p.upper.matrix());
}

std::array<double, 4> refbit_psi_minus_closed_form(const RefbitPovm& povm) {
    const double a = povm.alpha(), b = povm.beta();
    const double cross = 0.5 * b * (1 - b) + 0.25 * b * (1 - a) + 0.25 * a * (1 - b);
    return {0.5 * a * b + 0.5 * b * b, cross, cross, 0.5 * (1 - b) * (1 - a) + 0.5 * (1 - b) * (1 - b)};
}

OutcomeTable refbit_likelihood(const RefbitPovm& povm, const Direction& m) {
    const StateVector refbit = parallel_pair(Direction{0.0, 0.0});
    const std::array<Operator, 2> meas{povm.e0(), povm.e1()};
    return make_table(kSpinOutcomes, kTask3Hypotheses, shared_pair_table(refbit, psi_minus(), meas),
                      shared_pair_table(refbit, parallel_pair(m), meas));
}

double refbit_povm_conclusive(const RefbitPovm& povm, int nodes) {
    static constexpr double kPriors[] = {0.5, 0.5};
    return sphere_average(
        [&](double t) { return conclusive_probability(refbit_likelihood(povm, Direction{t, 0.0}), kPriors); },
        nodes);
}

RefbitOptimum optimize_refbit_measurement(int grid_n, int nodes) {
    if (grid_n < 11) throw std::invalid_argument("grid_n must be at least 11");
    static constexpr double kPriors[] = {0.5, 0.5};

    // E_a ⊗ E_b expands bilinearly in Π_k ⊗ Π_l, so the total-spin tables at
    // each quadrature node determine every POVM on the grid.
    const Resource refbit = Resource::refbit();
    const auto& rule = GaussLegendre::cached(nodes);
    std::vector<double> node_weight(rule.size());
    std::vector<std::array<double, 4>> mm_tables(rule.size());
    const auto psi_table = task3_table(refbit, Direction{M_PI / 2, 0.0}).column(0);
    for (int i = 0; i < rule.size(); ++i) {
        const double t = 0.5 * M_PI * (1.0 + rule.nodes()[i]);
        node_weight[i] = 0.5 * M_PI * rule.weights()[i] * 0.5 * std::sin(t);
        const auto col = task3_table(refbit, Direction{t, 0.0}).column(1);
        mm_tables[i] = {col[0], col[1], col[2], col[3]};
    }

    auto expand = [](const std::array<double, 2>& c0, const std::array<double, 2>& c1, auto&& pi_table) {
        const std::array<std::array<double, 2>, 2> c{c0, c1};
        std::array<double, 4> out{};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) out[2 * a + b] += c[a][k] * c[b][l] * pi_table[2 * k + l];
        return out;
    };

    RefbitOptimum best{0.0, 0.0, -1.0, 0.0};
    for (int ib = 0; ib < grid_n; ++ib) {
        const double beta = static_cast<double>(ib) / (grid_n - 1);
        for (int ia = 0; ia < grid_n; ++ia) {
            const double alpha = static_cast<double>(ia) / (grid_n - 1);
            const std::array<double, 2> c0{alpha, beta}, c1{1.0 - alpha, 1.0 - beta};
            const auto psi = expand(c0, c1, psi_table);
            double value = 0.0;
            for (int i = 0; i < rule.size(); ++i) {
                const auto mm = expand(c0, c1, mm_tables[i]);
                value += node_weight[i] * conclusive_probability(make_table(kSpinOutcomes, kTask3Hypotheses, psi, mm),
                                                                 kPriors);
            }
            if (ib > 0 && ib < grid_n - 1) best.max_interior = std::max(best.max_interior, value);
            if (value > best.conclusive + 1e-12) best = {alpha, beta, value, best.max_interior};
        }
    }
    return best;
}

// ------------------------------------------------ singlet -> refbit

RefbitConversion convert_sss_to_refbit(const Direction& n, std::uint64_t seed) {
    const StateVector up = n.up(), down = n.down();
    const CMatrix up_proj = up.amplitudes() * up.amplitudes().adjoint();
    const Operator bob_up = tensor(Operator(up_proj), Operator::identity(2));
    const double p_up = prob(psi_minus(), bob_up);

    std::mt19937_64 rng(seed);
    const bool is_up = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p_up;
    const Operator bob_proj =
        is_up ? bob_up : tensor(Operator(CMatrix::Identity(2, 2) - up_proj), Operator::identity(2));
    const StateVector collapsed = apply(bob_proj, psi_minus());

    // Bob knows n, so he can swap |n+> and |n-> on his own spin.
    const CMatrix flip = up.amplitudes() * down.amplitudes().adjoint() + down.amplitudes() * up.amplitudes().adjoint();
    const StateVector flipped = apply(tensor(Operator(flip), Operator::identity(2)), collapsed);
    return {flipped, is_up ? SpinOutcome::up : SpinOutcome::down, is_up ? n.opposite() : n};
}

double task3_conclusive_with_refbit(const StateVector& refbit, int nodes) {
    if (refbit.dims() != std::vector<int>{2, 2}) throw std::invalid_argument("refbit must be a two-qubit state");
    static constexpr double kPriors[] = {0.5, 0.5};
    // The integrand is a trigonometric polynomial of degree <= 2 in phi, so
    // an 8-point periodic rule is exact.
    constexpr int kAzimuths = 8;
    const auto meas = total_spin_measurement();
    const auto psi = shared_pair_table(refbit, psi_minus(), meas);
    return sphere_average(
        [&](double t) {
            double s = 0.0;
            for (int k = 0; k < kAzimuths; ++k) {
                const Direction m{t, 2.0 * M_PI * k / kAzimuths};
                const auto mm = shared_pair_table(refbit, parallel_pair(m), meas);
                s += conclusive_probability(make_table(kSpinOutcomes, kTask3Hypotheses, psi, mm), kPriors);
            }
            return s / kAzimuths;
        },
        nodes);
}

}  // namespace qres
