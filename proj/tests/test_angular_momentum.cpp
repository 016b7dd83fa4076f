#include <cmath>
#include <random>

#include "doctest.h"
#include "qres/angular_momentum.hpp"

using namespace qres;

TEST_CASE("SpinJ parsing and labels") {
    CHECK(SpinJ::parse("1/2").twice_j() == 1);
    CHECK(SpinJ::parse("0.5").twice_j() == 1);
    CHECK(SpinJ::parse("3").twice_j() == 6);
    CHECK(SpinJ::parse("6/2").twice_j() == 6);
    CHECK(SpinJ::parse("2.5").twice_j() == 5);
    CHECK(SpinJ(3).label() == "3/2");
    CHECK(SpinJ(4).label() == "2");
    CHECK(SpinJ(5).dim() == 6);
    CHECK_THROWS_AS(SpinJ::parse("1/3"), std::invalid_argument);
    CHECK_THROWS_AS(SpinJ::parse("0.3"), std::invalid_argument);
    CHECK_THROWS_AS(SpinJ::parse("-1"), std::invalid_argument);
    CHECK_THROWS_AS(SpinJ::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(SpinJ::parse("1/2x"), std::invalid_argument);
}

TEST_CASE("spin operators: Jz diagonal and su(2) algebra") {
    const auto half = spin_operators(SpinJ(1));
    CHECK(max_abs(half.jz.matrix() - CMatrix(Eigen::Vector2cd(0.5, -0.5).asDiagonal())) < 1e-15);
    const auto one = spin_operators(SpinJ(2));
    CHECK(max_abs(one.jz.matrix() - CMatrix(Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal())) < 1e-15);

    for (int t = 1; t <= 50; ++t) {
        const auto ops = spin_operators(SpinJ(t));
        const CMatrix comm = ops.jx.matrix() * ops.jy.matrix() - ops.jy.matrix() * ops.jx.matrix();
        CHECK(max_abs(comm - Complex(0, 1) * ops.jz.matrix()) < 1e-12);
        const CMatrix casimir = ops.jx.matrix() * ops.jx.matrix() + ops.jy.matrix() * ops.jy.matrix() +
                                ops.jz.matrix() * ops.jz.matrix();
        const double jj = 0.5 * t * (0.5 * t + 1.0);
        CHECK(max_abs(casimir - jj * CMatrix::Identity(t + 1, t + 1)) < 1e-10);
    }
}

TEST_CASE("cg_half: closed-form values at j = 1/2") {
    const SpinJ h = SpinJ::half();
    CHECK(cg_half(h, 0, Branch::plus, SpinComponent::up) == doctest::Approx(M_SQRT1_2).epsilon(1e-15));
    CHECK(cg_half(h, 0, Branch::minus, SpinComponent::up) == doctest::Approx(-M_SQRT1_2).epsilon(1e-15));
    CHECK(cg_half(h, 0, Branch::minus, SpinComponent::down) == doctest::Approx(M_SQRT1_2).epsilon(1e-15));
    CHECK(cg_half(h, 2, Branch::plus, SpinComponent::up) == doctest::Approx(1.0));
    CHECK(cg_half(h, 2, Branch::plus, SpinComponent::down) == 0.0);
    CHECK_THROWS_AS(cg_half(h, 4, Branch::plus, SpinComponent::up), std::out_of_range);
    CHECK_THROWS_AS(cg_half(h, 2, Branch::minus, SpinComponent::up), std::out_of_range);
    CHECK_THROWS_AS(cg_half(h, 1, Branch::plus, SpinComponent::up), std::out_of_range);
}

TEST_CASE("cg_half: every 2x2 block is orthogonal for j <= 10") {
    for (int t = 1; t <= 20; ++t) {
        const SpinJ j(t);
        for (int m = -(t - 1); m <= t - 1; m += 2) {
            Eigen::Matrix2d block;
            block << cg_half(j, m, Branch::plus, SpinComponent::up), cg_half(j, m, Branch::plus, SpinComponent::down),
                cg_half(j, m, Branch::minus, SpinComponent::up), cg_half(j, m, Branch::minus, SpinComponent::down);
            CHECK((block * block.transpose() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("coupled basis is orthonormal, complete, and diagonalizes J^2") {
    for (int t = 1; t <= 12; ++t) {
        const SpinJ j(t);
        const CoupledBasis basis(j);
        REQUIRE(basis.size() == static_cast<std::size_t>(2 * j.dim()));
        CMatrix u(2 * j.dim(), basis.size());
        int col = 0;
        for (const auto& [key, v] : basis.vectors()) u.col(col++) = v.amplitudes();
        CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(basis.size(), basis.size())) < 1e-12);

        // Oracle: J^2 eigenvalue of each coupled vector.
        const auto s = spin_operators(SpinJ::half());
        const auto o = spin_operators(j);
        const auto ia = Operator::identity(2), ib = Operator::identity(j.dim());
        const Operator x = tensor(s.jx, ib) + tensor(ia, o.jx);
        const Operator y = tensor(s.jy, ib) + tensor(ia, o.jy);
        const Operator z = tensor(s.jz, ib) + tensor(ia, o.jz);
        const CMatrix j2 = (x * x + y * y + z * z).matrix();
        for (const auto& [key, v] : basis.vectors()) {
            const double big_j = 0.5 * key.first;
            CHECK(max_abs(j2 * v.amplitudes() - big_j * (big_j + 1) * v.amplitudes()) < 1e-10);
            CHECK(max_abs(z.matrix() * v.amplitudes() - 0.5 * key.second * v.amplitudes()) < 1e-12);
        }
    }
}

TEST_CASE("singlet: spin-1/2 and spin-1 forms") {
    const StateVector s = singlet(SpinJ::half());
    CHECK(s.dims() == std::vector<int>{2, 2});
    CHECK(std::abs(s[1] - Complex(M_SQRT1_2)) < 1e-15);
    CHECK(std::abs(s[2] + Complex(M_SQRT1_2)) < 1e-15);

    // Spin 1: the J = 0 eigenvector from the oracle, compared as a ray.
    const Projector zero = oracle_zero_spin_projector(SpinJ(2));
    CHECK(zero.rank() == 1);
    CVector expected = CVector::Zero(9);
    expected[0 * 3 + 2] = 1.0;
    expected[1 * 3 + 1] = -1.0;
    expected[2 * 3 + 0] = 1.0;
    const StateVector want(expected, {3, 3});
    CHECK(same_ray(singlet(SpinJ(2)), want));
    CHECK(std::abs(prob(want, zero) - 1.0) < 1e-12);
}

TEST_CASE("singlet lies in the total-spin-zero eigenspace for j <= 10") {
    for (int t = 1; t <= 20; ++t) {
        const SpinJ j(t);
        const StateVector s = singlet(j);
        CHECK(std::abs(s.norm() - 1.0) < 1e-12);
        CHECK(std::abs(prob(s, oracle_zero_spin_projector(j)) - 1.0) < 1e-12);
    }
}

TEST_CASE("singlet is invariant under R ⊗ R") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    std::normal_distribution<double> g;
    for (int t = 1; t <= 20; ++t) {
        const SpinJ j(t);
        const StateVector s = singlet(j);
        for (int k = 0; k < 20; ++k) {
            const Operator r = rotation(j, angle(rng), {g(rng), g(rng), g(rng)});
            CHECK(r.is_unitary(1e-10));
            CHECK(std::abs(overlap_abs(apply(tensor(r, r), s), s) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("qubit total-spin projectors") {
    const auto p = total_spin_projectors_qubits();
    CHECK(p.lower.rank() == 1);
    CHECK(p.upper.rank() == 3);
    CHECK(max_abs(p.lower.matrix() + p.upper.matrix() - CMatrix::Identity(4, 4)) < 1e-15);

    // Π0 |z+,z-> = (|z+,z-> - |z-,z+>)/2
    const StateVector updown = StateVector::basis({2, 2}, 1);
    CVector want(4);
    want << 0.0, 0.5, -0.5, 0.0;
    CHECK(max_abs(p.lower.matrix() * updown.amplitudes() - want) < 1e-15);
    CHECK(std::abs(prob(singlet(SpinJ::half()), p.lower) - 1.0) < 1e-15);
}

TEST_CASE("pair projectors: ranks, completeness, specialization") {
    const auto half = total_spin_projectors_pair(SpinJ::half());
    const auto qubits = total_spin_projectors_qubits();
    // Spin-1/2 ⊗ spin-1/2 in either factor order gives the same projectors.
    CHECK(max_abs(half.lower.matrix() - qubits.lower.matrix()) < 1e-12);
    CHECK(max_abs(half.upper.matrix() - qubits.upper.matrix()) < 1e-12);

    const auto one = total_spin_projectors_pair(SpinJ(2));
    CHECK(one.lower.rank() == 2);
    CHECK(one.upper.rank() == 4);

    for (int t = 1; t <= 20; ++t) {
        const auto p = total_spin_projectors_pair(SpinJ(t));
        CHECK(p.lower.rank() == t);
        CHECK(p.upper.rank() == t + 2);
        CHECK(max_abs(p.lower.matrix() + p.upper.matrix() - CMatrix::Identity(2 * (t + 1), 2 * (t + 1))) < 1e-12);
        CHECK(max_abs(p.lower.matrix() * p.upper.matrix()) < 1e-12);
    }
}

TEST_CASE("oracle spectrum") {
    const Eigen::VectorXd half = oracle_total_spin_eigenvalues(SpinJ::half());
    REQUIRE(half.size() == 4);
    CHECK(std::abs(half[0]) < 1e-12);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(half[k] - 2.0) < 1e-12);

    const Eigen::VectorXd one = oracle_total_spin_eigenvalues(SpinJ(2));
    REQUIRE(one.size() == 6);
    for (int k = 0; k < 2; ++k) CHECK(std::abs(one[k] - 0.75) < 1e-12);
    for (int k = 2; k < 6; ++k) CHECK(std::abs(one[k] - 3.75) < 1e-12);
}

TEST_CASE("closed-form pair projectors match the spectral oracle for j <= 10") {
    for (int t = 1; t <= 20; ++t) {
        const auto p = total_spin_projectors_pair(SpinJ(t));
        const auto q = oracle_projectors(SpinJ(t));
        CHECK(max_abs(p.lower.matrix() - q.lower.matrix()) < 1e-10);
        CHECK(max_abs(p.upper.matrix() - q.upper.matrix()) < 1e-10);
        CHECK(max_abs(q.lower.matrix() + q.upper.matrix() - CMatrix::Identity(2 * (t + 1), 2 * (t + 1))) < 1e-10);
    }
}
