#ifndef TORSIONFORGE_EMBEDDINGS_HPP
#define TORSIONFORGE_EMBEDDINGS_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "torsionforge/form.hpp"
#include "torsionforge/linalg.hpp"
#include "torsionforge/stabilizer.hpp"

namespace torsionforge {

/// Blade basis of Lambda^k(R^n) in mask order.
template <class S>
std::vector<Form<S>> blade_basis(int n, int k) {
  std::vector<Form<S>> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == k) {
      Form<S> f(n);
      f[m] = S(1);
      out.push_back(f);
    }
  return out;
}

/// Matrix of the derivation action of a linear map on Lambda^k coefficients.
template <class S>
MatX<S> derivation_action_on_grade(const MatX<S>& a, int k) {
  const int n = static_cast<int>(a.rows());
  auto basis = blade_basis<S>(n, k);
  const int d = static_cast<int>(basis.size());
  MatX<S> out(d, d);
  for (int c = 0; c < d; ++c) {
    Form<S> img = derivation_on_form(a, basis[c]);
    for (int r = 0; r < d; ++r) out(r, c) = img.inner(basis[r]);
  }
  return out;
}

/// Matrix of the derivation action of a 2-form on Lambda^k coefficients.
template <class S>
MatX<S> so_action_on_grade(const Form<S>& alpha, int k) {
  return derivation_action_on_grade(so_matrix(alpha), k);
}

/// Actions of a subalgebra of 2-forms on the carrier R^n (x) m, where m is a
/// bracket-invariant span of 2-forms; used for intrinsic-torsion isotypic
/// splits. Returns defining (vector) matrices and carrier matrices.
template <class S>
std::pair<std::vector<MatX<S>>, std::vector<MatX<S>>> vector_tensor_m_action(
    const std::vector<Form<S>>& subalgebra, const std::vector<Form<S>>& m_basis, double tol = 1e-12) {
  const int n = subalgebra.front().dim();
  const int dm = static_cast<int>(m_basis.size());
  MatX<S> gram(dm, dm);
  for (int a = 0; a < dm; ++a)
    for (int b = 0; b < dm; ++b) gram(a, b) = m_basis[a].inner(m_basis[b]);
  std::vector<MatX<S>> defining, ops;
  for (const auto& g : subalgebra) {
    MatX<S> mg = so_matrix(g);
    MatX<S> ad(dm, dm);
    for (int b = 0; b < dm; ++b) {
      Form<S> img = so_act_on_form(g, m_basis[b]);
      VecX<S> rhs(dm);
      for (int a = 0; a < dm; ++a) rhs(a) = m_basis[a].inner(img);
      auto coords = solve_consistent<S>(gram, rhs, tol);
      if (!coords) throw std::invalid_argument("vector_tensor_m_action: m not invariant or degenerate");
      ad.col(b) = *coords;
    }
    defining.push_back(mg);
    ops.push_back(kron<S>(mg, MatX<S>::Identity(dm, dm)) + kron<S>(MatX<S>::Identity(n, n), ad));
  }
  return {defining, ops};
}

/// Standard Kaehler form e_12 + e_34 + ... on R^{2n}.
template <class S>
Form<S> standard_kaehler_form(int two_n) {
  if (two_n % 2) throw std::invalid_argument("standard_kaehler_form: even dimension required");
  Form<S> f(two_n);
  for (int p = 0; p < two_n / 2; ++p) f[(1u << (2 * p)) | (1u << (2 * p + 1))] = S(1);
  return f;
}

/// u(n) inside so(2n) for the standard complex structure, as 2-forms:
/// span{ e_{2i-1,2i}, e_{2i-1,2j-1} + e_{2i,2j}, e_{2i-1,2j} - e_{2i,2j-1} }.
template <class S>
std::vector<Form<S>> unitary_subalgebra(int n) {
  const int d = 2 * n;
  std::vector<Form<S>> out;
  auto blade2 = [&](int a, int b, S coeff) {  // 1-based, a < b
    return Form<S>::blade(d, {a, b}, coeff);
  };
  for (int i = 1; i <= n; ++i) out.push_back(blade2(2 * i - 1, 2 * i, S(1)));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      out.push_back(blade2(2 * i - 1, 2 * j - 1, S(1)) + blade2(2 * i, 2 * j, S(1)));
      out.push_back(blade2(2 * i - 1, 2 * j, S(1)) - blade2(2 * i, 2 * j - 1, S(1)));
    }
  return out;
}

/// su(n) = u(n) with the trace condition sum_i omega_{2i-1,2i} = 0.
template <class S>
std::vector<Form<S>> special_unitary_subalgebra(int n) {
  auto u = unitary_subalgebra<S>(n);
  std::vector<Form<S>> out;
  // replace the n center-line generators by n-1 traceless differences
  for (int i = 1; i < n; ++i) out.push_back(u[i - 1] - u[i]);
  for (std::size_t k = n; k < u.size(); ++k) out.push_back(u[k]);
  return out;
}

/// Solution space of the u(n)/su(n) defining equations on 2-form
/// coefficients; used to cross-check the explicit bases above.
template <class S>
MatX<S> unitary_equation_solution_space(int n, bool special) {
  const int d = 2 * n;
  auto basis = blade_basis<S>(d, 2);
  const int nb = static_cast<int>(basis.size());
  auto coeff_index = [&](int a, int b) {  // 1-based a < b
    std::uint32_t mask = (1u << (a - 1)) | (1u << (b - 1));
    for (int k = 0; k < nb; ++k)
      if (basis[k].support().front() == mask) return k;
    throw std::logic_error("unitary_equation_solution_space: blade lookup failed");
  };
  std::vector<VecX<S>> rows;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      VecX<S> r1 = VecX<S>::Zero(nb);  // omega_{2i-1,2j-1} = omega_{2i,2j}
      r1(coeff_index(2 * i - 1, 2 * j - 1)) = S(1);
      r1(coeff_index(2 * i, 2 * j)) = S(-1);
      rows.push_back(r1);
      VecX<S> r2 = VecX<S>::Zero(nb);  // omega_{2i-1,2j} = -omega_{2i,2j-1}
      r2(coeff_index(2 * i - 1, 2 * j)) = S(1);
      r2(coeff_index(2 * i, 2 * j - 1)) = S(1);
      rows.push_back(r2);
    }
  // all remaining mixed coefficients (pairs not of the above patterns) vanish
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b) {
      int ia = (a + 1) / 2, ib = (b + 1) / 2;
      if (ia == ib) continue;  // center line e_{2i-1,2i}: free
      // handled by the two-pattern rows
      (void)ia;
      (void)ib;
    }
  if (special) {
    VecX<S> tr = VecX<S>::Zero(nb);
    for (int i = 1; i <= n; ++i) tr(coeff_index(2 * i - 1, 2 * i)) = S(1);
    rows.push_back(tr);
  }
  MatX<S> m(static_cast<int>(rows.size()), nb);
  for (std::size_t r = 0; r < rows.size(); ++r) m.row(static_cast<int>(r)) = rows[r].transpose();
  return kernel_basis<S>(std::move(m));
}

/// The reference G2 3-form.
template <class S>
Form<S> g2_three_form() {
  Form<S> w(7);
  auto add = [&](std::initializer_list<int> idx, int sgn) {
    w += Form<S>::blade(7, idx, S(sgn));
  };
  add({1, 2, 7}, 1);
  add({3, 4, 7}, 1);
  add({5, 6, 7}, -1);
  add({1, 3, 5}, 1);
  add({2, 4, 5}, -1);
  add({1, 4, 6}, 1);
  add({2, 3, 6}, 1);
  return w;
}

/// Stabilizer subalgebra in so(n) of a k-form, as 2-forms.
template <class S>
std::vector<Form<S>> form_stabilizer_subalgebra(const Form<S>& target, double tol = 1e-12) {
  const int n = target.dim();
  int k = target.homogeneous_grade();
  if (k < 0) throw std::invalid_argument("form_stabilizer_subalgebra: homogeneous form required");
  auto two_forms = blade_basis<S>(n, 2);
  auto carrier = blade_basis<S>(n, k);
  const int nc = static_cast<int>(carrier.size());
  MatX<S> m(nc, static_cast<int>(two_forms.size()));
  for (std::size_t a = 0; a < two_forms.size(); ++a) {
    Form<S> img = so_act_on_form(two_forms[a], target);
    for (int r = 0; r < nc; ++r) m(r, static_cast<int>(a)) = img.inner(carrier[r]);
  }
  MatX<S> kern = kernel_basis<S>(std::move(m), tol);
  std::vector<Form<S>> out;
  for (int c = 0; c < kern.cols(); ++c) {
    Form<S> f(n);
    for (std::size_t a = 0; a < two_forms.size(); ++a) f += two_forms[a] * kern(static_cast<int>(a), c);
    out.push_back(f);
  }
  return out;
}

/// Orthogonal complement of a set of 2-forms inside Lambda^2(R^n).
template <class S>
std::vector<Form<S>> complement_in_so(const std::vector<Form<S>>& sub, int n, double tol = 1e-12) {
  auto two_forms = blade_basis<S>(n, 2);
  const int nb = static_cast<int>(two_forms.size());
  MatX<S> m(static_cast<int>(sub.size()), nb);
  for (std::size_t r = 0; r < sub.size(); ++r)
    for (int c = 0; c < nb; ++c) m(static_cast<int>(r), c) = sub[r].inner(two_forms[c]);
  MatX<S> kern = kernel_basis<S>(std::move(m), tol);
  std::vector<Form<S>> out;
  for (int c = 0; c < kern.cols(); ++c) {
    Form<S> f(n);
    for (int a = 0; a < nb; ++a) f += two_forms[a] * kern(a, c);
    out.push_back(f);
  }
  return out;
}

/// The unique 5-dimensional irreducible so(3)-representation, realized on
/// traceless symmetric 3x3 matrices; returns the three image matrices in
/// so(5) for an orthonormal basis of the carrier (entries involve sqrt(3),
/// hence double scalars).
inline std::vector<Eigen::MatrixXd> so3_irrep5() {
  using M3 = Eigen::Matrix3d;
  std::vector<M3> gen(3);
  gen[0] << 0, 0, 0, 0, 0, -1, 0, 1, 0;  // rotation in (2,3)-plane
  gen[1] << 0, 0, 1, 0, 0, 0, -1, 0, 0;  // rotation in (3,1)-plane
  gen[2] << 0, -1, 0, 1, 0, 0, 0, 0, 0;  // rotation in (1,2)-plane
  // orthonormal basis of Sym^2_0(R^3) under <S,T> = tr(ST)/2
  std::vector<M3> basis(5);
  basis[0] << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  basis[1] << 0, 0, 1, 0, 0, 0, 1, 0, 0;
  basis[2] << 0, 0, 0, 0, 0, 1, 0, 1, 0;
  basis[3] << 1, 0, 0, 0, -1, 0, 0, 0, 0;
  double s3 = std::sqrt(3.0);
  basis[4] << 1 / s3, 0, 0, 0, 1 / s3, 0, 0, 0, -2 / s3;
  auto ip = [](const M3& a, const M3& b) { return (a * b).trace() / 2.0; };
  std::vector<Eigen::MatrixXd> out;
  for (const auto& g : gen) {
    Eigen::MatrixXd m(5, 5);
    for (int c = 0; c < 5; ++c) {
      M3 img = g * basis[c] - basis[c] * g;
      for (int r = 0; r < 5; ++r) m(r, c) = ip(img, basis[r]);
    }
    out.push_back(m);
  }
  return out;
}

/// Rational matrix of the A3-type generator of so(3) acting on the 5-dim
/// irrep in the unnormalized polynomial basis; used for exact weight counts.
inline MatQ so3_irrep5_weight_generator() {
  // basis: xy, x^2-y^2, xz, yz, x^2+y^2-2z^2; L = x d_y - y d_x
  MatQ m = MatQ::Zero(5, 5);
  m(1, 0) = Rational(1);   // xy -> x^2 - y^2
  m(0, 1) = Rational(-4);  // x^2-y^2 -> -4xy
  m(3, 2) = Rational(-1);  // xz -> -yz
  m(2, 3) = Rational(1);   // yz -> xz
  return m;
}

}  // namespace torsionforge

#endif
