#include "qres/angular_momentum.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace qres {

namespace {

// Spectral gaps between neighbouring J(J+1) values are at least 1/2 for the
// spaces used here, far above this grouping tolerance.
constexpr double kEigenGroupTol = 1e-8;

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return v;
}

Operator squared_total(const SpinOperators& a, const SpinOperators& b) {
    const auto ia = Operator::identity(a.jz.dim());
    const auto ib = Operator::identity(b.jz.dim());
    const Operator x = tensor(a.jx, ib) + tensor(ia, b.jx);
    const Operator y = tensor(a.jy, ib) + tensor(ia, b.jy);
    const Operator z = tensor(a.jz, ib) + tensor(ia, b.jz);
    return x * x + y * y + z * z;
}

CMatrix eigen_projector(const Eigen::SelfAdjointEigenSolver<CMatrix>& es, double target) {
    const Eigen::Index n = es.eigenvalues().size();
    CMatrix p = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(es.eigenvalues()[k] - target) < kEigenGroupTol) {
            const auto v = es.eigenvectors().col(k);
            p += v * v.adjoint();
        }
    }
    return p;
}

// Rounding the accumulated outer products to exact Hermitian form keeps the
// Projector invariants far inside their tolerance.
Projector symmetrized(const CMatrix& p) { return Projector(Operator(0.5 * (p + p.adjoint()))); }

}  // namespace

SpinJ SpinJ::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty spin label");
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const int num = parse_int(text.substr(0, slash));
        const int den = parse_int(text.substr(slash + 1));
        if (den != 1 && den != 2) throw std::invalid_argument("spin must be a multiple of 1/2: " + std::string(text));
        return SpinJ(den == 1 ? 2 * num : num);
    }
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    const double twice = 2.0 * v;
    if (!std::isfinite(twice) || twice < 0 || std::abs(twice - std::round(twice)) > 1e-12)
        throw std::invalid_argument("spin must be a non-negative multiple of 1/2: " + s);
    return SpinJ(static_cast<int>(std::lround(twice)));
}

std::string SpinJ::label() const {
    if (is_half_integer()) return std::to_string(twice_j_) + "/2";
    return std::to_string(twice_j_ / 2);
}

SpinOperators spin_operators(SpinJ j) {
    const int d = j.dim();
    const double jj = j.value() * (j.value() + 1.0);
    CMatrix jz = CMatrix::Zero(d, d);
    CMatrix raise = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double m = j.value() - i;
        jz(i, i) = m;
        // J+|j,m> lands on index i-1.
        if (i > 0) raise(i - 1, i) = std::sqrt(jj - m * (m + 1.0));
    }
    const CMatrix lower = raise.adjoint();
    const Complex two_i(0.0, 2.0);
    return {Operator(0.5 * (raise + lower)), Operator((raise - lower) / two_i), Operator(std::move(jz))};
}

Operator rotation(SpinJ j, double theta, const std::array<double, 3>& axis) {
    const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(n > 0)) throw std::invalid_argument("rotation axis must be non-zero");
    const auto ops = spin_operators(j);
    const Operator generator(ops.jx.matrix() * (axis[0] / n) + ops.jy.matrix() * (axis[1] / n) +
                             ops.jz.matrix() * (axis[2] / n));
    return exp_i_hermitian(generator, theta);
}

double cg_half(SpinJ j, int twice_m_total, Branch branch, SpinComponent component) {
    const int twice_big_j = branch == Branch::plus ? j.twice_j() + 1 : j.twice_j() - 1;
    if (twice_big_j < 0 || std::abs(twice_m_total) > twice_big_j || (twice_m_total - twice_big_j) % 2 != 0)
        throw std::out_of_range("cg_half: m_total out of range for this multiplet");

    const double x = static_cast<double>(twice_m_total) / (j.twice_j() + 1);
    const double sign_in = (branch == Branch::plus) == (component == SpinComponent::up) ? 1.0 : -1.0;
    const double mag = std::sqrt(std::max(0.0, 0.5 * (1.0 + sign_in * x)));
    if (component == SpinComponent::up && branch == Branch::minus) return -mag;
    return mag;
}

CoupledBasis::CoupledBasis(SpinJ j) : j_(j) {
    const int d = j.dim();
    for (Branch branch : {Branch::minus, Branch::plus}) {
        const int twice_big_j = branch == Branch::plus ? j.twice_j() + 1 : j.twice_j() - 1;
        if (twice_big_j < 0) continue;
        for (int twice_m = twice_big_j; twice_m >= -twice_big_j; twice_m -= 2) {
            CVector v = CVector::Zero(2 * d);
            if (twice_m - 1 >= -j.twice_j() && twice_m - 1 <= j.twice_j())
                v[m_index(j, twice_m - 1)] = cg_half(j, twice_m, branch, SpinComponent::up);
            if (twice_m + 1 >= -j.twice_j() && twice_m + 1 <= j.twice_j())
                v[d + m_index(j, twice_m + 1)] = cg_half(j, twice_m, branch, SpinComponent::down);
            vectors_.emplace(std::pair{twice_big_j, twice_m}, StateVector(std::move(v), {2, d}));
        }
    }
}

const StateVector& CoupledBasis::at(Branch branch, int twice_m) const {
    const int twice_big_j = branch == Branch::plus ? j_.twice_j() + 1 : j_.twice_j() - 1;
    const auto it = vectors_.find({twice_big_j, twice_m});
    if (it == vectors_.end()) throw std::out_of_range("coupled basis vector does not exist");
    return it->second;
}

StateVector singlet(SpinJ j) {
    const int d = j.dim();
    CVector v = CVector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int twice_m = j.twice_j(); twice_m >= -j.twice_j(); twice_m -= 2) {
        const int j_minus_m = (j.twice_j() - twice_m) / 2;
        const double sign = j_minus_m % 2 == 0 ? 1.0 : -1.0;
        v[m_index(j, twice_m) * d + m_index(j, -twice_m)] = sign;
    }
    return StateVector(std::move(v), {d, d});
}

PairProjectors total_spin_projectors_qubits() {
    const double r = 1.0 / std::sqrt(2.0);
    CVector s0(4);
    s0 << 0.0, r, -r, 0.0;
    const CMatrix p0 = s0 * s0.adjoint();
    return {Projector(Operator(p0)), Projector(Operator(CMatrix::Identity(4, 4) - p0))};
}

PairProjectors total_spin_projectors_pair(SpinJ j) {
    const CoupledBasis basis(j);
    const Eigen::Index n = 2 * j.dim();
    CMatrix lower = CMatrix::Zero(n, n);
    CMatrix upper = CMatrix::Zero(n, n);
    for (const auto& [key, vec] : basis.vectors()) {
        CMatrix& target = key.first == j.twice_j() + 1 ? upper : lower;
        target += vec.amplitudes() * vec.amplitudes().adjoint();
    }
    return {symmetrized(lower), symmetrized(upper)};
}

Eigen::VectorXd oracle_total_spin_eigenvalues(SpinJ j) {
    const Operator j2 = squared_total(spin_operators(SpinJ::half()), spin_operators(j));
    return Eigen::SelfAdjointEigenSolver<CMatrix>(j2.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
}

PairProjectors oracle_projectors(SpinJ j) {
    const Operator j2 = squared_total(spin_operators(SpinJ::half()), spin_operators(j));
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(j2.matrix());

    const double jv = j.value();
    const double lower_target = (jv - 0.5) * (jv + 0.5);
    const double upper_target = (jv + 0.5) * (jv + 1.5);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double e = es.eigenvalues()[k];
        if (std::abs(e - lower_target) >= kEigenGroupTol && std::abs(e - upper_target) >= kEigenGroupTol)
            throw NumericalError("oracle_projectors: eigenvalue " + std::to_string(e) +
                                 " matches no allowed total spin");
    }
    return {symmetrized(eigen_projector(es, lower_target)), symmetrized(eigen_projector(es, upper_target))};
}

Projector oracle_zero_spin_projector(SpinJ j) {
    const auto ops = spin_operators(j);
    const Operator j2 = squared_total(ops, ops);
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(j2.matrix());
    return symmetrized(eigen_projector(es, 0.0));
}

}  // namespace qres
