#ifndef TORSIONFORGE_TABLES_HPP
#define TORSIONFORGE_TABLES_HPP

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionforge/clifford.hpp"
#include "torsionforge/embeddings.hpp"
#include "torsionforge/stabilizer.hpp"

namespace torsionforge {

struct SpinorStabilizerRow {
  std::string group;
  int dim = 0;
  int invariants_plus = 0;
  int invariants_minus = 0;
  MatQ basis;  // coefficients over the 28 two-form generators of spin(8)
};

/// Everything needed to run stabilizer chains in the real 16-dimensional
/// spin representation of dimension 8.
class Dim8SpinGeometry {
public:
  Dim8SpinGeometry() : rep_(build_real_clifford8()) {
    auto blades = blade_basis<Rational>(8, 2);
    for (const auto& b : blades) ops_.push_back(spin_matrix(rep_, b));
    volume_ = real_volume8(rep_);
    // split R^16 into the +-1 eigenspaces of the volume element
    MatQ vp = volume_ - MatQ::Identity(16, 16);
    MatQ vm = volume_ + MatQ::Identity(16, 16);
    plus_ = kernel_basis<Rational>(vp);
    minus_ = kernel_basis<Rational>(vm);
    if (plus_.cols() != 8 || minus_.cols() != 8)
      throw std::logic_error("Dim8SpinGeometry: half-spinor split failed");
  }

  const std::vector<MatQ>& ops() const { return ops_; }

  VecQ plus_spinor(const VecX<Rational>& coeff) const { return plus_ * coeff; }
  VecQ minus_spinor(const VecX<Rational>& coeff) const { return minus_ * coeff; }

  /// dim of the joint kernel of the subalgebra action on a half-spinor space.
  int invariants_on_half(const MatQ& subalg_basis, bool plus) const {
    std::vector<MatQ> ops;
    for (int c = 0; c < subalg_basis.cols(); ++c) {
      MatQ op = MatQ::Zero(16, 16);
      for (int a = 0; a < subalg_basis.rows(); ++a)
        if (!subalg_basis(a, c).is_zero()) op += ops_[a] * subalg_basis(a, c);
      ops.push_back(op);
    }
    ops.push_back(volume_ - (plus ? MatQ(MatQ::Identity(16, 16)) : MatQ(-MatQ::Identity(16, 16))));
    return static_cast<int>(joint_kernel<Rational>(ops).cols());
  }

  StabilizerResult<Rational> stabilizer_of(const std::vector<VecQ>& spinors) const {
    return stabilizer_joint<Rational>(ops_, spinors);
  }

private:
  GammaRep<Rational> rep_;
  std::vector<MatQ> ops_;
  MatQ volume_;
  MatQ plus_, minus_;
};

/// Regenerates the invariant-spinor table in dimension 8 by computing
/// stabilizers of explicitly chosen spinor tuples. Genericity of each tuple
/// is asserted by reaching the expected stabilizer dimension, redrawing with
/// seeded integer coefficients if a pick happens to be special.
inline std::vector<SpinorStabilizerRow> spinor_stabilizer_table_dim8() {
  Dim8SpinGeometry geo;
  std::mt19937 rng(20240915u);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto random_half = [&](bool plus) {
    while (true) {
      VecQ c(8);
      bool nz = false;
      for (int i = 0; i < 8; ++i) {
        int v = coef(rng);
        c(i) = Rational(v);
        nz = nz || v != 0;
      }
      if (!nz) continue;
      return plus ? geo.plus_spinor(c) : geo.minus_spinor(c);
    }
  };
  auto row_for = [&](const std::string& name, const std::vector<bool>& halves, int want_dim) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      std::vector<VecQ> spinors;
      for (bool plus : halves) spinors.push_back(random_half(plus));
      auto stab = geo.stabilizer_of(spinors);
      if (stab.dimension != want_dim) continue;  // non-generic tuple, redraw
      SpinorStabilizerRow row;
      row.group = name;
      row.dim = stab.dimension;
      row.basis = stab.basis;
      row.invariants_plus = geo.invariants_on_half(stab.basis, true);
      row.invariants_minus = geo.invariants_on_half(stab.basis, false);
      return row;
    }
    throw std::runtime_error("spinor_stabilizer_table_dim8: could not reach a generic tuple for " + name);
  };
  std::vector<SpinorStabilizerRow> rows;
  rows.push_back(row_for("spin7", {false}, 21));
  rows.push_back(row_for("su4", {false, false}, 15));
  rows.push_back(row_for("sp2", {false, false, false}, 10));
  rows.push_back(row_for("g2", {false, true}, 14));
  rows.push_back(row_for("su3", {false, true, false}, 8));
  rows.push_back(row_for("su2", {false, true, false, true}, 3));
  return rows;
}

/// dim GL(n) - dim Lambda^3(R^n) for the range where 3-forms can define
/// geometries.
inline std::map<int, int> three_form_dimension_count() {
  std::map<int, int> out;
  for (int n = 3; n <= 8; ++n) out[n] = n * n - n * (n - 1) * (n - 2) / 6;
  return out;
}

}  // namespace torsionforge

#endif
