// tasks.hpp
// The three resource-comparison experiments.
//
//  Task I   estimate the angle between two spins (uniformly random pair).
//  Task II  tell a parallel pair from an anti-parallel one.
//  Task III tell a singlet |psi-> from a parallel pair |m,m> with m unknown.
//
// Each task is run with one of three shared resources: a shared reference
// frame (both parties measure along a common z axis), a shared singlet
// state (each party measures the total spin of the received spin together
// with its half of the singlet), or a refbit (a parallel pair along an axis
// unknown to both parties).
//
// All states are written in the sender's frame. Bob's particles precede
// Charlie's in every tensor product.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qres/angular_momentum.hpp"
#include "qres/bayesian_inference.hpp"
#include "qres/core_linalg.hpp"

namespace qres {

struct Resource {
    enum class Kind { srf, sss, refbit };

    Kind kind = Kind::srf;
    SpinJ j{1};  // meaningful for sss only

    static Resource srf() { return {Kind::srf, SpinJ(1)}; }
    static Resource sss(SpinJ j = SpinJ::half()) { return {Kind::sss, j}; }
    static Resource refbit() { return {Kind::refbit, SpinJ(1)}; }

    /// "srf", "sss" or "refbit".
    std::string name() const;

    friend bool operator==(const Resource&, const Resource&) = default;
};

enum class Metric { avg_info_bits, conclusive_prob, inconclusive_prob, conclusive_prob_given_antiparallel };

std::string to_string(Metric m);

/// Rows are outcomes, columns are hypotheses (the states being told apart).
struct OutcomeTable {
    std::vector<std::string> outcomes;
    std::vector<std::string> hypotheses;
    std::vector<std::vector<double>> probs;  // probs[outcome][hypothesis]

    double at(std::size_t outcome, std::size_t hypothesis) const { return probs[outcome][hypothesis]; }
    std::vector<double> column(std::size_t hypothesis) const;
    /// Largest |column sum - 1| over hypotheses.
    double max_column_defect() const;
};

struct TaskResult {
    int task = 0;
    Resource resource;
    std::optional<double> parameter;
    Metric metric = Metric::avg_info_bits;
    double value = 0.0;
    std::optional<OutcomeTable> outcome_table;
};

/// Polar/azimuthal angles of a unit vector.
struct Direction {
    double theta = 0.0;
    double phi = 0.0;

    StateVector up() const;
    StateVector down() const;
    Direction opposite() const;
    std::array<double, 3> cartesian() const;
};

/// Probability of a conclusive outcome: Σ over outcomes that are
/// impossible (< 1e-12) under exactly one hypothesis of the prior-weighted
/// probability of that outcome.
double conclusive_probability(const OutcomeTable& table, std::span<const double> hypothesis_priors);

inline constexpr double kZeroProbability = 1e-12;

// ---------------------------------------------------------------- Task I

/// Shared singlet, closed form: P(00)=s/8, P(01)=P(10)=1/4-s/8,
/// P(11)=1/2+s/8 with s = sin^2(alpha/2). Outcome labels "00","01","10","11",
/// where 0 and 1 are the total spins measured by Bob and Charlie.
Likelihood task1_likelihood_sss();

/// The same four probabilities from |z+>|psi->|n2> and Π_i ⊗ Π_j.
std::array<double, 4> task1_probs_sss_constructive(double alpha, double phi = 0.0);

/// Shared reference frame, both parties measuring along z. The pair is
/// averaged over orientations: first spin uniform on the sphere, second at
/// angle alpha from it. Alpha = 0 / pi give the Task II hypotheses.
/// Outcomes "++", "+-", "-+", "--".
Likelihood srf_likelihood(int nodes = kDefaultQuadratureNodes);

TaskResult task1_avg_info(const Resource& resource, int nodes = kDefaultQuadratureNodes);

// ---------------------------------------------------------------- Task II

/// Outcome probabilities ordered (lower,lower), (lower,upper),
/// (upper,lower), (upper,upper), where lower/upper is total spin j -+ 1/2
/// measured by Bob and Charlie respectively.
struct Task2Probs {
    std::array<double, 4> parallel;
    std::array<double, 4> antiparallel;
};

/// Closed-form probabilities, O(1) in j.
Task2Probs task2_probs_closed_form(SpinJ j);

/// Full-state evaluation: builds |z+>|j,m> ⊗ |z±>|j,-m> summed against the
/// spin-j singlet and applies the pair projectors on each side.
Task2Probs task2_probs_constructive(SpinJ j);

/// Likelihood on alpha ∈ {0, pi}, closed form. Outcomes "00".."11".
Likelihood task2_likelihood_sss(SpinJ j);

TaskResult task2_avg_info(const Resource& resource, int nodes = kDefaultQuadratureNodes);

/// Average information of SSS(j) per j, from the closed forms.
std::vector<TaskResult> task2_spinj_sweep(std::span<const SpinJ> j_values);

struct Task2Conclusive {
    TaskResult averaged;             // prior-weighted over both hypotheses
    TaskResult given_antiparallel;   // conditional on the anti-parallel pair
    /// SRF only: smallest conditional outcome probability met across the
    /// sampled directions (all must be > 1e-6 for "never conclusive").
    std::optional<double> min_outcome_probability;
    int sampled_directions = 0;
};

/// SSS(1/2): exact from the outcome table. SRF: per-direction check over
/// `samples` seeded random directions with polar angle at least 0.1 rad
/// from either pole.
Task2Conclusive task2_conclusive(const Resource& resource, std::uint64_t seed = 0, int samples = 100);

// ---------------------------------------------------------------- Task III

/// Hypotheses: "psi-" and "m,m". Outcomes "++","+-","-+","--" for SRF and
/// "00","01","10","11" otherwise. Built from the states and measurements.
OutcomeTable task3_table(const Resource& resource, const Direction& m);

/// Tabulated closed forms in theta for the same cells.
OutcomeTable task3_table_closed_form(const Resource& resource, double theta);

/// The theta-dependent table together with its sphere average.
struct Task3Tables {
    std::function<OutcomeTable(double theta)> at;
    OutcomeTable sphere_average;
};

Task3Tables task3_tables(const Resource& resource, int nodes = kDefaultQuadratureNodes);

/// Result carrying the sphere-averaged outcome table; value is the
/// conclusive probability.
TaskResult task3_outcome_table(const Resource& resource, int nodes = kDefaultQuadratureNodes);

/// Sphere-averaged conclusive probability with equal priors.
TaskResult task3_conclusive(const Resource& resource, int nodes = kDefaultQuadratureNodes);

// ------------------------------------------------ refbit measurement family

/// Rotationally invariant two-outcome POVM E0 = αΠ0 + βΠ1, E1 = 1 - E0.
class RefbitPovm {
public:
    RefbitPovm(double alpha, double beta);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    Operator e0() const;
    Operator e1() const;

private:
    double alpha_;
    double beta_;
};

/// Closed forms P(Ea,Eb|psi-) for (a,b) = 00, 01, 10, 11.
std::array<double, 4> refbit_psi_minus_closed_form(const RefbitPovm& povm);

/// Outcome table for Task III with a z-aligned refbit under the POVM,
/// evaluated constructively.
OutcomeTable refbit_likelihood(const RefbitPovm& povm, const Direction& m);

/// Sphere-averaged conclusive probability of the POVM with a refbit.
double refbit_povm_conclusive(const RefbitPovm& povm, int nodes = kDefaultQuadratureNodes);

struct RefbitOptimum {
    double alpha = 0.0;
    double beta = 0.0;
    double conclusive = 0.0;
    /// Largest conclusive probability over grid points with 0 < β < 1.
    double max_interior = 0.0;
};

/// Exhaustive search over the grid_n x grid_n lattice on [0,1]^2. Ties
/// (within 1e-12) go to the smallest β, then the smallest α.
RefbitOptimum optimize_refbit_measurement(int grid_n, int nodes = kDefaultQuadratureNodes);

// ------------------------------------------------ singlet -> refbit

enum class SpinOutcome { up, down };

struct RefbitConversion {
    StateVector state;         // two qubits, Bob then Charlie
    SpinOutcome bob_outcome;   // Bob's result measuring along n
    Direction refbit_axis;     // both spins point along this axis
};

/// Bob measures his half of |psi-> along n (outcome drawn from a seeded
/// generator), which leaves Charlie's spin anti-parallel to Bob's; Bob then
/// flips his own spin in the n basis, giving a parallel pair along -n
/// (outcome up) or +n (outcome down).
RefbitConversion convert_sss_to_refbit(const Direction& n, std::uint64_t seed);

/// Task III conclusive probability when the shared refbit is the given
/// two-qubit state. Averages over m in both angles.
double task3_conclusive_with_refbit(const StateVector& refbit, int nodes = kDefaultQuadratureNodes);

}  // namespace qres
