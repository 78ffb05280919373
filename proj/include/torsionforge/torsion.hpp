#ifndef TORSIONFORGE_TORSION_HPP
#define TORSIONFORGE_TORSION_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionforge/form.hpp"
#include "torsionforge/linalg.hpp"

namespace torsionforge {

/// Rank-3 tensor antisymmetric in the first two slots:
/// T(X,Y,Z) = -T(Y,X,Z). Components in an orthonormal frame.
template <class S>
class TorsionTensor {
public:
  TorsionTensor() : n_(0) {}
  explicit TorsionTensor(int n) : n_(n), c_(n * n * n, S(0)) {}

  int dim() const { return n_; }

  const S& operator()(int i, int j, int k) const { return c_[(i * n_ + j) * n_ + k]; }

  void set(int i, int j, int k, const S& v) {
    c_[(i * n_ + j) * n_ + k] = v;
    c_[(j * n_ + i) * n_ + k] = -v;
  }
  void add(int i, int j, int k, const S& v) {
    if (i == j) return;
    c_[(i * n_ + j) * n_ + k] += v;
    c_[(j * n_ + i) * n_ + k] -= v;
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& v : c_)
      if (!scalar_traits<S>::is_zero(v, tol)) return false;
    return true;
  }

  TorsionTensor operator+(const TorsionTensor& o) const {
    TorsionTensor r(n_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }
  TorsionTensor operator-(const TorsionTensor& o) const {
    TorsionTensor r(n_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
  }
  TorsionTensor operator*(const S& s) const {
    TorsionTensor r(n_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
  }

  /// Componentwise inner product over all index triples.
  S inner(const TorsionTensor& o) const {
    S acc(0);
    for (std::size_t i = 0; i < c_.size(); ++i) acc += c_[i] * o.c_[i];
    return acc;
  }

  /// T(X,Y) as a vector, X = e_i, Y = e_j.
  VecX<S> directional(int i, int j) const {
    VecX<S> v(n_);
    for (int k = 0; k < n_; ++k) v(k) = (*this)(i, j, k);
    return v;
  }

  static TorsionTensor from_3form(const Form<S>& t) {
    const int n = t.dim();
    TorsionTensor out(n);
    for (std::uint32_t m : t.support()) {
      std::vector<int> idx;
      for (int b = 0; b < n; ++b)
        if (m & (1u << b)) idx.push_back(b);
      if (idx.size() != 3) throw std::invalid_argument("TorsionTensor::from_3form: grade-3 input required");
      const S& v = t[m];
      int p[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
      for (int q = 0; q < 6; ++q) {
        S sv = q < 3 ? v : S(-v);
        out.c_[(idx[p[q][0]] * n + idx[p[q][1]]) * n + idx[p[q][2]]] = sv;
      }
    }
    return out;
  }

  /// Total antisymmetrization (cyclic average over the three slots),
  /// returned as a 3-form.
  Form<S> skew_part_form() const {
    Form<S> out(n_);
    const S third = S(1) / S(3);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        for (int k = j + 1; k < n_; ++k) {
          S v = ((*this)(i, j, k) + (*this)(j, k, i) + (*this)(k, i, j)) * third;
          out[(1u << i) | (1u << j) | (1u << k)] = v;
        }
    return out;
  }

  bool antisymmetry_ok(double tol = 0.0) const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          if (!scalar_traits<S>::is_zero((*this)(i, j, k) + (*this)(j, i, k), tol)) return false;
    return true;
  }

private:
  int n_;
  std::vector<S> c_;
};

/// Rank-3 tensor antisymmetric in the last two slots:
/// A(X,V,W) = -A(X,W,V); the difference tensor of a metric connection.
template <class S>
class DifferenceTensor {
public:
  DifferenceTensor() : n_(0) {}
  explicit DifferenceTensor(int n) : n_(n), c_(n * n * n, S(0)) {}

  int dim() const { return n_; }
  const S& operator()(int i, int j, int k) const { return c_[(i * n_ + j) * n_ + k]; }
  void set(int i, int j, int k, const S& v) {
    c_[(i * n_ + j) * n_ + k] = v;
    c_[(i * n_ + k) * n_ + j] = -v;
  }
  S& raw(int i, int j, int k) { return c_[(i * n_ + j) * n_ + k]; }

  bool antisymmetry_ok(double tol = 0.0) const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          if (!scalar_traits<S>::is_zero((*this)(i, j, k) + (*this)(i, k, j), tol)) return false;
    return true;
  }

  /// A_X as a 2-form for X = e_i.
  Form<S> two_form(int i) const {
    Form<S> out(n_);
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) out[(1u << j) | (1u << k)] = (*this)(i, j, k);
    return out;
  }

private:
  int n_;
  std::vector<S> c_;
};

/// T(X,Y,Z) = A(X,Y,Z) - A(Y,X,Z).
template <class S>
TorsionTensor<S> a_to_t(const DifferenceTensor<S>& a, double tol = 0.0) {
  if (!a.antisymmetry_ok(tol)) throw std::invalid_argument("a_to_t: input not antisymmetric in last two slots");
  const int n = a.dim();
  TorsionTensor<S> t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        S v = a(i, j, k) - a(j, i, k);
        if (i < j) t.set(i, j, k, v);
      }
  return t;
}

/// 2A(X,Y,Z) = T(X,Y,Z) - T(Y,Z,X) + T(Z,X,Y).
template <class S>
DifferenceTensor<S> t_to_a(const TorsionTensor<S>& t, double tol = 0.0) {
  if (!t.antisymmetry_ok(tol)) throw std::invalid_argument("t_to_a: input not antisymmetric in first two slots");
  const int n = t.dim();
  DifferenceTensor<S> a(n);
  const S half = S(1) / S(2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) a.raw(i, j, k) = (t(i, j, k) - t(j, k, i) + t(k, i, j)) * half;
  return a;
}

template <class S>
struct TorsionDecomposition {
  VecX<S> vectorial;        // V with T_V(X,Y,Z) = g(V,X)g(Y,Z) - g(V,Y)g(X,Z)
  Form<S> skew;             // totally antisymmetric part as a 3-form
  TorsionTensor<S> prime;   // Cartan-type remainder
};

template <class S>
TorsionTensor<S> vectorial_torsion(const VecX<S>& v) {
  const int n = static_cast<int>(v.size());
  TorsionTensor<S> t(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        S val = (k == j ? v(i) : S(0)) - (k == i ? v(j) : S(0));
        t.set(i, j, k, val);
      }
  return t;
}

/// Orthogonal projection onto the three O(n)-irreducible summands
/// T = vectorial + skew + prime. Rejected for n = 2 where the torsion space
/// is already irreducible.
template <class S>
TorsionDecomposition<S> decompose_torsion(const TorsionTensor<S>& t) {
  const int n = t.dim();
  if (n < 3) throw std::invalid_argument("decompose_torsion: space irreducible for n = 2");
  TorsionDecomposition<S> out;

  // vectorial: trace over slots 1 and 3, T_V trace is (1-n) g(V,Y)
  VecX<S> c = VecX<S>::Zero(n);
  for (int j = 0; j < n; ++j) {
    S acc(0);
    for (int i = 0; i < n; ++i) acc += t(i, j, i);
    c(j) = acc;
  }
  out.vectorial = c / S(1 - n);

  out.skew = t.skew_part_form();

  TorsionTensor<S> rest = t - vectorial_torsion(out.vectorial) - TorsionTensor<S>::from_3form(out.skew);
  out.prime = rest;
  return out;
}

template <class S>
TorsionTensor<S> recompose(const TorsionDecomposition<S>& d) {
  return vectorial_torsion(d.vectorial) + TorsionTensor<S>::from_3form(d.skew) + d.prime;
}

/// Frame-free sigma_T: sigma(X,Y,Z,V) = g(T(X,Y),T(Z,V)) + g(T(Y,Z),T(X,V))
/// + g(T(Z,X),T(Y,V)); agrees with the frame-sum formula on 3-forms.
template <class S>
Form<S> sigma_framefree(const Form<S>& t) {
  TorsionTensor<S> tt = TorsionTensor<S>::from_3form(t);
  const int n = t.dim();
  Form<S> out(n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      for (int z = y + 1; z < n; ++z)
        for (int v = z + 1; v < n; ++v) {
          S val = tt.directional(x, y).dot(tt.directional(z, v)) +
                  tt.directional(y, z).dot(tt.directional(x, v)) +
                  tt.directional(z, x).dot(tt.directional(y, v));
          out[(1u << x) | (1u << y) | (1u << z) | (1u << v)] = val;
        }
  return out;
}

/// Sum of basis 3-form blades of Lambda^3(R^n) in mask order.
template <class S>
std::vector<Form<S>> three_form_basis(int n) {
  std::vector<Form<S>> basis;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == 3) {
      Form<S> f(n);
      f[m] = S(1);
      basis.push_back(f);
    }
  return basis;
}

/// Intrinsic-torsion style map Theta(T)(X) = pr_m(X -| T) for a subspace m
/// of 2-forms given by a basis; returned as an n x dim(m) coefficient matrix
/// in that basis (rows = frame directions).
template <class S>
MatX<S> theta_map(const Form<S>& t, const std::vector<Form<S>>& m_basis, double tol = 1e-12) {
  const int n = t.dim();
  const int dm = static_cast<int>(m_basis.size());
  // Gram matrix of the m basis under the blade inner product
  MatX<S> gram(dm, dm);
  for (int a = 0; a < dm; ++a)
    for (int b = 0; b < dm; ++b) gram(a, b) = m_basis[a].inner(m_basis[b]);
  MatX<S> rhs(dm, n);
  for (int i = 1; i <= n; ++i) {
    Form<S> ct = interior(i, t);
    for (int a = 0; a < dm; ++a) rhs(a, i - 1) = m_basis[a].inner(ct);
  }
  // coords = gram^{-1} rhs, solved column by column
  MatX<S> coords(dm, n);
  for (int i = 0; i < n; ++i) {
    auto sol = solve_consistent<S>(gram, VecX<S>(rhs.col(i)), tol);
    if (!sol) throw std::invalid_argument("theta_map: degenerate m basis");
    coords.col(i) = *sol;
  }
  return coords.transpose();
}

template <class S>
struct CharacteristicSolve {
  std::optional<Form<S>> torsion;  // empty on obstruction
  bool unique = false;             // Theta injective on Lambda^3
  std::string reason;              // set when torsion is empty
};

/// Solves 2 Gamma = -Theta(T) for a 3-form T given Gamma in R^n (x) m
/// coordinates (rows = frame directions, columns = m-basis coefficients).
template <class S>
CharacteristicSolve<S> solve_characteristic(const MatX<S>& gamma, const std::vector<Form<S>>& m_basis,
                                            int n, double tol = 1e-12) {
  auto basis3 = three_form_basis<S>(n);
  const int nt = static_cast<int>(basis3.size());
  const int dm = static_cast<int>(m_basis.size());
  MatX<S> m(n * dm, nt);
  for (int c = 0; c < nt; ++c) {
    MatX<S> th = theta_map(basis3[c], m_basis, tol);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < dm; ++a) m(i * dm + a, c) = th(i, a);
  }
  VecX<S> rhs(n * dm);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < dm; ++a) rhs(i * dm + a) = S(-2) * gamma(i, a);

  CharacteristicSolve<S> out;
  out.unique = (rank<S>(m, tol) == nt);
  auto sol = solve_consistent<S>(m, rhs, tol);
  if (!sol) {
    out.reason = "intrinsic torsion outside the image of Theta: no characteristic connection";
    return out;
  }
  Form<S> t(n);
  for (int c = 0; c < nt; ++c) {
    auto supp = basis3[c].support();
    t[supp.front()] = (*sol)(c);
  }
  out.torsion = t;
  return out;
}

}  // namespace torsionforge

#endif
