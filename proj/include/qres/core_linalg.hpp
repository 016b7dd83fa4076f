// core_linalg.hpp
// Dense complex states and operators over tensor-product Hilbert spaces.
//
// Basis convention for a single qubit: index 0 is |z+>, index 1 is |z->.
// Composite spaces carry an explicit list of factor dimensions; the first
// factor is the most significant index (Kronecker order).

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qres {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Raised when a computation produces a value that violates a numerical
/// contract (non-Hermitian expectation, unnormalizable state, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kNormTolerance = 1e-12;

class StateVector {
public:
    /// Normalizes the amplitudes. Throws if dims do not multiply to the
    /// amplitude count or the vector is zero.
    StateVector(CVector amplitudes, std::vector<int> dims);

    /// Single-factor convenience constructor.
    explicit StateVector(CVector amplitudes);

    /// Computational basis state |index> on the given factor dims.
    static StateVector basis(std::vector<int> dims, Eigen::Index index);

    const CVector& amplitudes() const { return amplitudes_; }
    const std::vector<int>& dims() const { return dims_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    double norm() const { return amplitudes_.norm(); }
    Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

private:
    CVector amplitudes_;
    std::vector<int> dims_;
};

class Operator {
public:
    explicit Operator(CMatrix entries);

    static Operator identity(Eigen::Index dim);

    const CMatrix& matrix() const { return entries_; }
    Eigen::Index dim() const { return entries_.rows(); }

    Operator adjoint() const { return Operator(entries_.adjoint()); }
    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-12) const;

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex s, const Operator& a);

private:
    CMatrix entries_;
};

/// Orthogonal projector. Construction checks Hermiticity and idempotency
/// to 1e-12 in max-norm.
class Projector {
public:
    explicit Projector(Operator op);

    const Operator& op() const { return op_; }
    const CMatrix& matrix() const { return op_.matrix(); }
    Eigen::Index dim() const { return op_.dim(); }
    Eigen::Index rank() const;

    static constexpr double kTolerance = 1e-12;

private:
    Operator op_;
};

/// Largest absolute entry of a matrix.
double max_abs(const CMatrix& m);

StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);
Operator tensor(const Projector& a, const Projector& b);

/// cos(theta/2)|z+> + e^{i phi} sin(theta/2)|z->. theta must be in [0, pi].
StateVector bloch_ket(double theta, double phi);

/// <state|op|state>. Imaginary residue above 1e-12 raises NumericalError.
double prob(const StateVector& state, const Operator& op);
double prob(const StateVector& state, const Projector& op);

/// Expectation of (left ⊗ right) where `left` acts on the leading factors
/// of `state` and `right` on the remaining ones. Avoids forming the
/// Kronecker product, so it scales to the spin-j pair spaces.
double local_prob(const StateVector& state, const Operator& left, const Operator& right);

StateVector apply(const Operator& op, const StateVector& state);

/// Reorders tensor factors: output factor k is input factor order[k].
StateVector permute_factors(const StateVector& state, std::span<const int> order);

/// |<a|b>|; states are rays, so |<a|b>| = 1 means equal.
double overlap_abs(const StateVector& a, const StateVector& b);
bool same_ray(const StateVector& a, const StateVector& b, double tol = 1e-12);

/// Haar-random element of SU(2), deterministic in the seed.
Operator haar_random_su2(std::uint64_t seed);

/// exp(-i t H) for Hermitian H.
Operator exp_i_hermitian(const Operator& hermitian, double t);

}  // namespace qres
