#ifndef TORSIONFORGE_LIEALG_HPP
#define TORSIONFORGE_LIEALG_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionforge/form.hpp"
#include "torsionforge/linalg.hpp"

namespace torsionforge {

/// Structure constants of a Lie algebra with a declared reductive split
/// g = h + m, an inner product on m and (optionally) an Ad-invariant
/// extension Q on h. Indices are 0-based; [e_i, e_j] = sum_k c(i,j,k) e_k.
template <class S>
struct LieAlgebraData {
  int n = 0;
  std::vector<int> h;   // subalgebra indices, ascending
  std::vector<int> m;   // complement, ascending
  std::vector<S> c;     // n^3 structure constants
  MatX<S> metric_m;     // dim_m x dim_m, default identity
  MatX<S> q_h;          // dim_h x dim_h
  bool has_q_h = false;

  static LieAlgebraData make(int n_total, const std::vector<int>& h_indices = {}) {
    LieAlgebraData d;
    d.n = n_total;
    d.h = h_indices;
    std::sort(d.h.begin(), d.h.end());
    for (int i = 0; i < n_total; ++i)
      if (!std::binary_search(d.h.begin(), d.h.end(), i)) d.m.push_back(i);
    d.c.assign(static_cast<std::size_t>(n_total) * n_total * n_total, S(0));
    d.metric_m = MatX<S>::Identity(static_cast<int>(d.m.size()), static_cast<int>(d.m.size()));
    return d;
  }

  int dim_m() const { return static_cast<int>(m.size()); }
  int dim_h() const { return static_cast<int>(h.size()); }

  const S& cc(int i, int j, int k) const { return c[(static_cast<std::size_t>(i) * n + j) * n + k]; }

  void set_bracket(int i, int j, int k, const S& v) {
    c[(static_cast<std::size_t>(i) * n + j) * n + k] = v;
    c[(static_cast<std::size_t>(j) * n + i) * n + k] = -v;
  }

  VecX<S> bracket(const VecX<S>& x, const VecX<S>& y) const {
    VecX<S> out = VecX<S>::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (scalar_traits<S>::is_zero(x(i), 0.0)) continue;
      for (int j = 0; j < n; ++j) {
        if (scalar_traits<S>::is_zero(y(j), 0.0)) continue;
        for (int k = 0; k < n; ++k) out(k) += x(i) * y(j) * cc(i, j, k);
      }
    }
    return out;
  }

  VecX<S> full_from_m(const VecX<S>& xm) const {
    VecX<S> out = VecX<S>::Zero(n);
    for (int a = 0; a < dim_m(); ++a) out(m[a]) = xm(a);
    return out;
  }
  VecX<S> m_part(const VecX<S>& x) const {
    VecX<S> out(dim_m());
    for (int a = 0; a < dim_m(); ++a) out(a) = x(m[a]);
    return out;
  }
  VecX<S> h_part(const VecX<S>& x) const {
    VecX<S> out(dim_h());
    for (int a = 0; a < dim_h(); ++a) out(a) = x(h[a]);
    return out;
  }

  /// [e_{m_a}, e_{m_b}] projected to m, in m coordinates.
  VecX<S> bracket_m(int a, int b) const {
    VecX<S> out(dim_m());
    for (int k = 0; k < dim_m(); ++k) out(k) = cc(m[a], m[b], m[k]);
    return out;
  }
  /// h-part of [e_{m_a}, e_{m_b}], in h coordinates.
  VecX<S> bracket_h(int a, int b) const {
    VecX<S> out(dim_h());
    for (int k = 0; k < dim_h(); ++k) out(k) = cc(m[a], m[b], h[k]);
    return out;
  }

  S inner_m(const VecX<S>& x, const VecX<S>& y) const { return x.dot(metric_m * y); }

  bool metric_is_identity(double tol = 0.0) const {
    MatX<S> diff = metric_m - MatX<S>::Identity(dim_m(), dim_m());
    for (int i = 0; i < diff.rows(); ++i)
      for (int j = 0; j < diff.cols(); ++j)
        if (!scalar_traits<S>::is_zero(diff(i, j), tol)) return false;
    return true;
  }

  /// Isotropy action of a full-coordinates element on m, as a dim_m matrix.
  MatX<S> ad_on_m(const VecX<S>& w) const {
    MatX<S> out(dim_m(), dim_m());
    for (int b = 0; b < dim_m(); ++b) {
      VecX<S> eb = VecX<S>::Zero(n);
      eb(m[b]) = S(1);
      VecX<S> img = bracket(w, eb);
      for (int a = 0; a < dim_m(); ++a) out(a, b) = img(m[a]);
    }
    return out;
  }

  void validate(double tol = 1e-12) const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (!scalar_traits<S>::is_zero(cc(i, j, k) + cc(j, i, k), tol))
            throw std::invalid_argument("LieAlgebraData: structure constants not antisymmetric");
    // Jacobi on basis triples
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          VecX<S> ei = VecX<S>::Zero(n), ej = VecX<S>::Zero(n), ek = VecX<S>::Zero(n);
          ei(i) = S(1);
          ej(j) = S(1);
          ek(k) = S(1);
          VecX<S> jac = bracket(ei, bracket(ej, ek)) + bracket(ej, bracket(ek, ei)) + bracket(ek, bracket(ei, ej));
          for (int r = 0; r < n; ++r)
            if (!scalar_traits<S>::is_zero(jac(r), tol)) throw std::invalid_argument("LieAlgebraData: Jacobi identity fails");
        }
    // h is a subalgebra and Ad(h)m stays in m
    for (int a : h)
      for (int b : h)
        for (int k : m)
          if (!scalar_traits<S>::is_zero(cc(a, b, k), tol))
            throw std::invalid_argument("LieAlgebraData: h is not a subalgebra");
    for (int a : h)
      for (int b : m)
        for (int k : h)
          if (!scalar_traits<S>::is_zero(cc(a, b, k), tol))
            throw std::invalid_argument("LieAlgebraData: Ad(h) m not contained in m");
    // metric symmetric
    for (int a = 0; a < dim_m(); ++a)
      for (int b = 0; b < dim_m(); ++b)
        if (!scalar_traits<S>::is_zero(metric_m(a, b) - metric_m(b, a), tol))
          throw std::invalid_argument("LieAlgebraData: metric not symmetric");
    if (rank<S>(metric_m, tol) != dim_m()) throw std::invalid_argument("LieAlgebraData: metric degenerate");
  }

  bool naturally_reductive(double tol = 1e-12) const {
    for (int x = 0; x < dim_m(); ++x)
      for (int y = 0; y < dim_m(); ++y)
        for (int z = 0; z < dim_m(); ++z) {
          VecX<S> ey = VecX<S>::Zero(dim_m()), ez = VecX<S>::Zero(dim_m());
          ey(y) = S(1);
          ez(z) = S(1);
          S v = inner_m(bracket_m(x, y), ez) + inner_m(ey, bracket_m(x, z));
          if (!scalar_traits<S>::is_zero(v, tol)) return false;
        }
    return true;
  }
};

// -- canonical examples -----------------------------------------------------

/// so(3) with [e1,e2] = e3 cyclic (unit structure constants).
template <class S>
LieAlgebraData<S> so3_algebra() {
  auto d = LieAlgebraData<S>::make(3);
  d.set_bracket(0, 1, 2, S(1));
  d.set_bracket(1, 2, 0, S(1));
  d.set_bracket(2, 0, 1, S(1));
  return d;
}

template <class S>
LieAlgebraData<S> abelian_algebra(int n) {
  return LieAlgebraData<S>::make(n);
}

/// The 5-dimensional Heisenberg group normalized so that the contact form
/// e^5 has d eta = 2(e_12 + e_34): [e1,e2] = [e3,e4] = -2 e5.
template <class S>
LieAlgebraData<S> heisenberg5_algebra() {
  auto d = LieAlgebraData<S>::make(5);
  d.set_bracket(0, 1, 4, S(-2));
  d.set_bracket(2, 3, 4, S(-2));
  return d;
}

/// The rank-one solvable Lie algebra carrying a metric with Riemannian
/// holonomy G2 (scale parameter fixed to 1).
template <class S>
LieAlgebraData<S> sol_g2_algebra() {
  auto d = LieAlgebraData<S>::make(7);
  const S a = S(3) / S(5);
  const S b = S(6) / S(5);
  const S g = S(2) / S(5);
  for (int i : {0, 1, 4}) d.set_bracket(i, 6, i, a);
  for (int j : {2, 3, 5}) d.set_bracket(j, 6, j, b);
  d.set_bracket(0, 4, 2, -g);
  d.set_bracket(1, 4, 3, -g);
  d.set_bracket(0, 1, 5, -g);
  return d;
}

/// SO(3) x SO(3) / SO(2): h spanned by a3 + b3, basis ordered so that m
/// comes first: m = {a1, a2, b1, b2, (a3 - b3)/sqrt(2)-direction}; for exact
/// arithmetic we keep a3 - b3 unnormalized and a scaled metric entry.
template <class S>
LieAlgebraData<S> so3xso3_so2_algebra() {
  // basis: 0..2 = a1,a2,a3; 3..5 = b1,b2,b3 rebased below
  // we use basis e0=a1,e1=a2,e2=b1,e3=b2,e4=(a3-b3),e5=(a3+b3), h={5}
  auto d = LieAlgebraData<S>::make(6, {5});
  const S half = S(1) / S(2);
  // [a1,a2] = a3 = (e4+e5)/2
  d.set_bracket(0, 1, 4, half);
  d.set_bracket(0, 1, 5, half);
  // [b1,b2] = b3 = (e5-e4)/2
  d.set_bracket(2, 3, 4, -half);
  d.set_bracket(2, 3, 5, half);
  // [a2,a3] = a1, a3 = e4+e5 scaled: [a2, e4] = ?  a3 = (e4+e5)/2 inverted:
  // e4 = a3 - b3, e5 = a3 + b3 -> [e1, e4] = [a2, a3] = a1 = e0, [e1, e5] = a1
  d.set_bracket(1, 4, 0, S(1));
  d.set_bracket(1, 5, 0, S(1));
  // [a3,a1] = a2 -> [e4, e0] = a2 = e1, [e5, e0] = e1
  d.set_bracket(4, 0, 1, S(1));
  d.set_bracket(5, 0, 1, S(1));
  // [b2,b3] = b1 -> [e3, e4] = [b2, -b3] = -b1 = -e2, [e3, e5] = b1 = e2
  d.set_bracket(3, 4, 2, S(-1));
  d.set_bracket(3, 5, 2, S(1));
  // [b3,b1] = b2 -> [e4, e2] = -b2 = -e3, [e5, e2] = b2 = e3
  d.set_bracket(4, 2, 3, S(-1));
  d.set_bracket(5, 2, 3, S(1));
  // metric on m: product biinvariant metric; |a1|=|a2|=|b1|=|b2|=1,
  // |a3-b3|^2 = 2
  d.metric_m = MatX<S>::Identity(5, 5);
  d.metric_m(4, 4) = S(2);
  d.q_h = MatX<S>::Identity(1, 1);
  d.q_h(0, 0) = S(2);  // |a3+b3|^2 = 2
  d.has_q_h = true;
  return d;
}

}  // namespace torsionforge

#endif
