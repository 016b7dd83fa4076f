// angular_momentum.hpp
// Spin-j operators, j⊗1/2 Clebsch-Gordan coupling, spin-j singlets and
// total-spin projectors, with a brute-force spectral oracle for checking
// the closed forms.
//
// Spin labels and magnetic numbers are carried as twice their value so
// half-integers stay exact. Single-spin bases are ordered m = j, j-1, ..., -j.
// Pair spaces put the spin-1/2 factor first.

#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "qres/core_linalg.hpp"

namespace qres {

class SpinJ {
public:
    explicit constexpr SpinJ(int twice_j) : twice_j_(twice_j) {
        if (twice_j < 0) throw std::invalid_argument("spin must be non-negative");
    }

    static constexpr SpinJ half() { return SpinJ(1); }

    /// Accepts "1/2", "3/2", "0.5", "1", "2.5"; rejects anything that is not
    /// an exact multiple of 1/2.
    static SpinJ parse(std::string_view text);

    constexpr int twice_j() const { return twice_j_; }
    constexpr int dim() const { return twice_j_ + 1; }
    constexpr double value() const { return 0.5 * twice_j_; }
    constexpr bool is_half_integer() const { return twice_j_ % 2 == 1; }

    /// "1/2", "1", "3/2", ...
    std::string label() const;

    friend constexpr bool operator==(SpinJ a, SpinJ b) { return a.twice_j_ == b.twice_j_; }
    friend constexpr auto operator<=>(SpinJ a, SpinJ b) { return a.twice_j_ <=> b.twice_j_; }

private:
    int twice_j_;
};

/// Index of |j, m> in the descending-m basis.
constexpr int m_index(SpinJ j, int twice_m) { return (j.twice_j() - twice_m) / 2; }

struct SpinOperators {
    Operator jx;
    Operator jy;
    Operator jz;
};

SpinOperators spin_operators(SpinJ j);

/// exp(-i theta n·J) for a unit axis n.
Operator rotation(SpinJ j, double theta, const std::array<double, 3>& axis);

/// Which total-spin multiplet of j⊗1/2: J = j - 1/2 or J = j + 1/2.
enum class Branch { minus, plus };
enum class SpinComponent { up, down };

/// <j, m_total ∓ 1/2; ±|J, m_total> with J = j ± 1/2 selected by `branch`.
/// `up` pairs the spin-1/2 up state with |j, m_total - 1/2>, `down` pairs
/// spin-1/2 down with |j, m_total + 1/2>. At the edge of the J = j + 1/2
/// multiplet the missing component comes out as 0 from the formula itself.
/// Throws std::out_of_range when |m_total| exceeds J for the chosen branch.
double cg_half(SpinJ j, int twice_m_total, Branch branch, SpinComponent component);

/// Coupled basis |J, M> of the (spin-1/2 ⊗ spin-j) space.
class CoupledBasis {
public:
    explicit CoupledBasis(SpinJ j);

    SpinJ spin() const { return j_; }
    /// Key is (twice_J, twice_M).
    const std::map<std::pair<int, int>, StateVector>& vectors() const { return vectors_; }
    const StateVector& at(Branch branch, int twice_m) const;
    std::size_t size() const { return vectors_.size(); }

private:
    SpinJ j_;
    std::map<std::pair<int, int>, StateVector> vectors_;
};

/// Spin-j singlet (2j+1)^{-1/2} Σ_m (-1)^{j-m} |j,m>|j,-m>.
StateVector singlet(SpinJ j);

/// Pair of complementary total-spin projectors on a two-spin space.
/// `lower` is the smaller total spin.
struct PairProjectors {
    Projector lower;
    Projector upper;
};

/// Singlet/triplet projectors Π0, Π1 on two qubits.
PairProjectors total_spin_projectors_qubits();

/// Π_{j-1/2}, Π_{j+1/2} on spin-1/2 ⊗ spin-j, built from the CG closed forms.
PairProjectors total_spin_projectors_pair(SpinJ j);

/// Same projectors, obtained by diagonalizing (S ⊗ 1 + 1 ⊗ J)^2 and grouping
/// eigenvalues. Independent of cg_half.
PairProjectors oracle_projectors(SpinJ j);

/// Eigenvalues of the total J^2 on spin-1/2 ⊗ spin-j, ascending.
Eigen::VectorXd oracle_total_spin_eigenvalues(SpinJ j);

/// Projector onto total spin zero of spin-j ⊗ spin-j, from the spectrum of
/// the total J^2.
Projector oracle_zero_spin_projector(SpinJ j);

}  // namespace qres
