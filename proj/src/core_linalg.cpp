#include "qres/core_linalg.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

namespace qres {

namespace {

Eigen::Index product(const std::vector<int>& dims) {
    Eigen::Index p = 1;
    for (int d : dims) {
        if (d <= 0) throw std::invalid_argument("factor dimension must be positive");
        p *= d;
    }
    return p;
}

void require_square(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument("operator must be a non-empty square matrix");
}

}  // namespace

StateVector::StateVector(CVector amplitudes, std::vector<int> dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (product(dims_) != amplitudes_.size())
        throw std::invalid_argument("product of dims (" + std::to_string(product(dims_)) +
                                    ") != amplitude count (" +
                                    std::to_string(amplitudes_.size()) + ")");
    const double n = amplitudes_.norm();
    if (!(n > 1e-300) || !std::isfinite(n)) throw NumericalError("state cannot be normalized");
    amplitudes_ /= n;
}

StateVector::StateVector(CVector amplitudes)
    : StateVector(amplitudes, {static_cast<int>(amplitudes.size())}) {}

StateVector StateVector::basis(std::vector<int> dims, Eigen::Index index) {
    const Eigen::Index n = product(dims);
    if (index < 0 || index >= n) throw std::out_of_range("basis index out of range");
    CVector v = CVector::Zero(n);
    v[index] = 1.0;
    return StateVector(std::move(v), std::move(dims));
}

Operator::Operator(CMatrix entries) : entries_(std::move(entries)) { require_square(entries_); }

Operator Operator::identity(Eigen::Index dim) { return Operator(CMatrix::Identity(dim, dim)); }

bool Operator::is_hermitian(double tol) const {
    return max_abs(entries_ - entries_.adjoint()) < tol;
}

bool Operator::is_unitary(double tol) const {
    return max_abs(entries_.adjoint() * entries_ - CMatrix::Identity(dim(), dim())) < tol;
}

Operator operator+(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
    return Operator(a.entries_ + b.entries_);
}

Operator operator-(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
    return Operator(a.entries_ - b.entries_);
}

Operator operator*(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
    return Operator(a.entries_ * b.entries_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.entries_); }

Projector::Projector(Operator op) : op_(std::move(op)) {
    const CMatrix& p = op_.matrix();
    if (max_abs(p - p.adjoint()) >= kTolerance) throw NumericalError("projector is not Hermitian");
    if (max_abs(p * p - p) >= kTolerance) throw NumericalError("projector is not idempotent");
}

Eigen::Index Projector::rank() const {
    return static_cast<Eigen::Index>(std::lround(op_.matrix().trace().real()));
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

StateVector tensor(const StateVector& a, const StateVector& b) {
    CVector out(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        out.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return StateVector(std::move(out), std::move(dims));
}

Operator tensor(const Operator& a, const Operator& b) {
    const Eigen::Index n = a.dim(), m = b.dim();
    CMatrix out(n * m, n * m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out.block(i * m, j * m, m, m) = a.matrix()(i, j) * b.matrix();
    return Operator(std::move(out));
}

Operator tensor(const Projector& a, const Projector& b) { return tensor(a.op(), b.op()); }

StateVector bloch_ket(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= M_PI))
        throw std::domain_error("bloch_ket: theta must lie in [0, pi]");
    CVector v(2);
    v << std::cos(theta / 2), std::polar(1.0, std::fmod(phi, 2 * M_PI)) * std::sin(theta / 2);
    return StateVector(std::move(v), {2});
}

double prob(const StateVector& state, const Operator& op) {
    if (state.dim() != op.dim())
        throw std::invalid_argument("prob: state dimension " + std::to_string(state.dim()) +
                                    " != operator dimension " + std::to_string(op.dim()));
    const Complex e = state.amplitudes().dot(op.matrix() * state.amplitudes());
    if (std::abs(e.imag()) > 1e-12) throw NumericalError("prob: expectation has an imaginary part");
    return e.real();
}

double prob(const StateVector& state, const Projector& op) { return prob(state, op.op()); }

double local_prob(const StateVector& state, const Operator& left, const Operator& right) {
    const Eigen::Index dl = left.dim(), dr = right.dim();
    if (dl * dr != state.dim()) throw std::invalid_argument("local_prob: dimension mismatch");
    Eigen::Index prefix = 1;
    for (int d : state.dims()) {
        if (prefix == dl) break;
        prefix *= d;
    }
    if (prefix != dl) throw std::invalid_argument("local_prob: split does not fall on a factor boundary");

    // Column-major map: element (r, l) holds amplitude l * dr + r.
    Eigen::Map<const CMatrix> t(state.amplitudes().data(), dr, dl);
    const CMatrix transformed = right.matrix() * t * left.matrix().transpose();
    const Complex e = (t.conjugate().cwiseProduct(transformed)).sum();
    if (std::abs(e.imag()) > 1e-12) throw NumericalError("local_prob: expectation has an imaginary part");
    return e.real();
}

StateVector apply(const Operator& op, const StateVector& state) {
    if (state.dim() != op.dim()) throw std::invalid_argument("apply: dimension mismatch");
    return StateVector(op.matrix() * state.amplitudes(), state.dims());
}

StateVector permute_factors(const StateVector& state, std::span<const int> order) {
    const auto& dims = state.dims();
    const std::size_t n = dims.size();
    if (order.size() != n) throw std::invalid_argument("permute_factors: order has wrong length");
    std::vector<bool> seen(n, false);
    for (int k : order) {
        if (k < 0 || static_cast<std::size_t>(k) >= n || seen[k])
            throw std::invalid_argument("permute_factors: order is not a permutation");
        seen[k] = true;
    }

    std::vector<Eigen::Index> in_stride(n);
    Eigen::Index s = 1;
    for (std::size_t k = n; k-- > 0;) {
        in_stride[k] = s;
        s *= dims[k];
    }
    std::vector<int> out_dims(n);
    for (std::size_t k = 0; k < n; ++k) out_dims[k] = dims[order[k]];

    CVector out(state.dim());
    std::vector<int> digit(n, 0);
    for (Eigen::Index idx = 0; idx < state.dim(); ++idx) {
        Eigen::Index src = 0;
        for (std::size_t k = 0; k < n; ++k) src += digit[k] * in_stride[order[k]];
        out[idx] = state[src];
        for (std::size_t k = n; k-- > 0;) {
            if (++digit[k] < out_dims[k]) break;
            digit[k] = 0;
        }
    }
    return StateVector(std::move(out), std::move(out_dims));
}

double overlap_abs(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("overlap: dimension mismatch");
    return std::abs(a.amplitudes().dot(b.amplitudes()));
}

bool same_ray(const StateVector& a, const StateVector& b, double tol) {
    return std::abs(overlap_abs(a, b) - 1.0) < tol;
}

Operator haar_random_su2(std::uint64_t seed) {
    // A uniformly distributed unit quaternion is Haar-distributed on SU(2).
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double q[4];
    double n = 0.0;
    do {
        n = 0.0;
        for (double& x : q) {
            x = gauss(rng);
            n += x * x;
        }
    } while (n < 1e-12);
    n = std::sqrt(n);
    for (double& x : q) x /= n;
    CMatrix u(2, 2);
    u << Complex(q[0], q[1]), Complex(q[2], q[3]), Complex(-q[2], q[3]), Complex(q[0], -q[1]);
    return Operator(std::move(u));
}

Operator exp_i_hermitian(const Operator& hermitian, double t) {
    if (!hermitian.is_hermitian(1e-10)) throw std::invalid_argument("exp_i_hermitian: operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian.matrix());
    const Eigen::VectorXd& w = es.eigenvalues();
    CVector phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) phases[i] = std::polar(1.0, -t * w[i]);
    return Operator(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

}  // namespace qres
