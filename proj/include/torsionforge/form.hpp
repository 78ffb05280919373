#ifndef TORSIONFORGE_FORM_HPP
#define TORSIONFORGE_FORM_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionforge/linalg.hpp"
#include "torsionforge/scalar.hpp"

namespace torsionforge {

constexpr int kMaxFormDim = 10;

/// Sign produced when sorting the concatenation of two canonically ordered
/// blades into canonical order.
inline int blade_reorder_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

/// Multivector of an oriented Euclidean R^n, n <= 10. Coefficients are dense
/// over canonical blades indexed by bitmask (bit i-1 <=> e_i present). The
/// Clifford product uses the convention e_i . e_i = -1.
template <class S>
class Form {
public:
  Form() : dim_(0), c_(VecX<S>::Zero(1)) {}
  explicit Form(int dim) : dim_(check_dim(dim)), c_(VecX<S>::Zero(1 << dim)) {}

  static Form scalar(int dim, S v) {
    Form f(dim);
    f.c_(0) = std::move(v);
    return f;
  }

  /// Blade from 1-based strictly increasing indices.
  static Form blade(int dim, std::initializer_list<int> idx, S coeff = S(1)) {
    return blade(dim, std::vector<int>(idx), std::move(coeff));
  }
  static Form blade(int dim, const std::vector<int>& idx, S coeff = S(1)) {
    Form f(dim);
    std::uint32_t mask = 0;
    int prev = 0;
    for (int i : idx) {
      if (i <= prev || i > dim) throw std::invalid_argument("Form::blade: indices must be strictly increasing in 1..dim");
      mask |= 1u << (i - 1);
      prev = i;
    }
    f.c_(mask) = std::move(coeff);
    return f;
  }

  static Form basis_vector(int dim, int i) { return blade(dim, {i}); }

  static Form from_vector(const VecX<S>& v) {
    Form f(static_cast<int>(v.size()));
    for (int i = 0; i < v.size(); ++i) f.c_(1u << i) = v(i);
    return f;
  }

  int dim() const { return dim_; }
  int ncoeffs() const { return static_cast<int>(c_.size()); }

  const S& operator[](std::uint32_t mask) const { return c_(mask); }
  S& operator[](std::uint32_t mask) { return c_(mask); }

  const VecX<S>& coeffs() const { return c_; }
  VecX<S>& coeffs() { return c_; }

  bool is_zero(double tol = 0.0) const {
    for (int i = 0; i < c_.size(); ++i)
      if (!scalar_traits<S>::is_zero(c_(i), tol)) return false;
    return true;
  }

  /// -1 for mixed or zero input.
  int homogeneous_grade(double tol = 0.0) const {
    int grade = -1;
    for (std::uint32_t m = 0; m < c_.size(); ++m) {
      if (scalar_traits<S>::is_zero(c_(m), tol)) continue;
      int g = std::popcount(m);
      if (grade == -1) grade = g;
      else if (grade != g) return -1;
    }
    return grade;
  }

  Form grade_part(int k) const {
    Form out(dim_);
    for (std::uint32_t m = 0; m < c_.size(); ++m)
      if (std::popcount(m) == k) out.c_(m) = c_(m);
    return out;
  }

  S scalar_part() const { return c_(0); }

  Form operator+(const Form& o) const { check_same(o); Form r(dim_); r.c_ = c_ + o.c_; return r; }
  Form operator-(const Form& o) const { check_same(o); Form r(dim_); r.c_ = c_ - o.c_; return r; }
  Form operator-() const { Form r(dim_); r.c_ = -c_; return r; }
  Form operator*(const S& s) const { Form r(dim_); r.c_ = c_ * s; return r; }
  friend Form operator*(const S& s, const Form& f) { return f * s; }
  Form& operator+=(const Form& o) { check_same(o); c_ += o.c_; return *this; }
  Form& operator-=(const Form& o) { check_same(o); c_ -= o.c_; return *this; }
  Form& operator*=(const S& s) { c_ *= s; return *this; }

  bool operator==(const Form& o) const { return dim_ == o.dim_ && c_ == o.c_; }

  /// Sum of products of matching blade coefficients (blades orthonormal).
  S inner(const Form& o) const {
    check_same(o);
    S acc(0);
    for (int i = 0; i < c_.size(); ++i) acc += c_(i) * o.c_(i);
    return acc;
  }
  S norm_squared() const { return inner(*this); }

  std::vector<std::uint32_t> support(double tol = 0.0) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < c_.size(); ++m)
      if (!scalar_traits<S>::is_zero(c_(m), tol)) out.push_back(m);
    return out;
  }

  template <class T>
  Form<T> cast() const {
    Form<T> out(dim_);
    for (std::uint32_t m = 0; m < c_.size(); ++m) out[m] = static_cast<T>(to_double(c_(m)));
    return out;
  }

private:
  static int check_dim(int dim) {
    if (dim < 0 || dim > kMaxFormDim) throw std::invalid_argument("Form: dimension out of supported range");
    return dim;
  }
  void check_same(const Form& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("Form: dimension mismatch");
  }

  int dim_;
  VecX<S> c_;
};

using FormQ = Form<Rational>;
using FormD = Form<double>;

template <class S>
Form<S> wedge(const Form<S>& a, const Form<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  Form<S> out(a.dim());
  auto sa = a.support();
  auto sb = b.support();
  for (std::uint32_t ma : sa)
    for (std::uint32_t mb : sb) {
      if (ma & mb) continue;
      S term = a[ma] * b[mb];
      if (blade_reorder_sign(ma, mb) < 0) term = -term;
      out[ma | mb] += term;
    }
  return out;
}

/// Clifford (geometric) product with e_i . e_i = -1.
template <class S>
Form<S> gp(const Form<S>& a, const Form<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("geometric_product: dimension mismatch");
  Form<S> out(a.dim());
  auto sa = a.support();
  auto sb = b.support();
  for (std::uint32_t ma : sa)
    for (std::uint32_t mb : sb) {
      S term = a[ma] * b[mb];
      int sign = blade_reorder_sign(ma, mb);
      if (std::popcount(ma & mb) & 1) sign = -sign;
      if (sign < 0) term = -term;
      out[ma ^ mb] += term;
    }
  return out;
}

template <class S>
Form<S> commutator(const Form<S>& a, const Form<S>& b) {
  return gp(a, b) - gp(b, a);
}

/// Interior product e_i -| a for a single 1-based index.
template <class S>
Form<S> interior(int i, const Form<S>& a) {
  if (i < 1 || i > a.dim()) throw std::invalid_argument("interior: index out of range");
  const std::uint32_t bit = 1u << (i - 1);
  Form<S> out(a.dim());
  for (std::uint32_t m : a.support()) {
    if (!(m & bit)) continue;
    int below = std::popcount(m & (bit - 1));
    S term = a[m];
    if (below & 1) term = -term;
    out[m ^ bit] += term;
  }
  return out;
}

/// X -| a for a vector X given in the orthonormal frame.
template <class S>
Form<S> contract(const VecX<S>& x, const Form<S>& a) {
  if (static_cast<int>(x.size()) != a.dim()) throw std::invalid_argument("contract: dimension mismatch");
  Form<S> out(a.dim());
  for (int i = 0; i < x.size(); ++i)
    if (!scalar_traits<S>::is_zero(x(i), 0.0)) out += interior(i + 1, a) * x(i);
  return out;
}

/// Hodge star for the oriented orthonormal frame: *(e_1...e_k) = e_{k+1}...e_n.
template <class S>
Form<S> hodge_star(const Form<S>& a) {
  if (a.is_zero()) return a;
  int k = a.homogeneous_grade();
  if (k < 0) throw std::invalid_argument("hodge_star: mixed-grade input");
  const std::uint32_t full = (1u << a.dim()) - 1;
  Form<S> out(a.dim());
  for (std::uint32_t m : a.support()) {
    std::uint32_t comp = full ^ m;
    S term = a[m];
    if (blade_reorder_sign(m, comp) < 0) term = -term;
    out[comp] += term;
  }
  return out;
}

/// Scalar and 4-form parts of T.T for a 3-form T; grades 2 and 6 vanish
/// identically and are checked on the way through.
template <class S>
std::pair<S, Form<S>> clifford_square_parts(const Form<S>& t, double tol = 0.0) {
  if (!t.is_zero(tol) && t.homogeneous_grade(tol) != 3)
    throw std::invalid_argument("clifford_square_parts: input must be a 3-form");
  Form<S> sq = gp(t, t);
  return {sq.scalar_part(), sq.grade_part(4)};
}

/// sigma_T from the frame sum 2 sigma_T = sum_i (e_i -| T) ^ (e_i -| T).
template <class S>
Form<S> sigma_3form(const Form<S>& t, double tol = 0.0) {
  if (!t.is_zero(tol) && t.homogeneous_grade(tol) != 3)
    throw std::invalid_argument("sigma_3form: input must be a 3-form");
  Form<S> acc(t.dim());
  for (int i = 1; i <= t.dim(); ++i) {
    Form<S> ct = interior(i, t);
    acc += wedge(ct, ct);
  }
  return acc * (S(1) / S(2));
}

/// Value T(e_{i1},...,e_{ik}) of a homogeneous k-form on distinct frame
/// indices (1-based, any order).
template <class S>
S form_eval(const Form<S>& f, std::vector<int> idx) {
  std::uint32_t mask = 0;
  int sign = 1;
  // insertion sort, tracking the permutation sign
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i > 0 && idx[i] == idx[i - 1]) return S(0);
    mask |= 1u << (idx[i] - 1);
  }
  S v = f[mask];
  return sign < 0 ? S(-v) : v;
}

/// The dual vector of a 1-form part.
template <class S>
VecX<S> vector_part(const Form<S>& f) {
  VecX<S> v = VecX<S>::Zero(f.dim());
  for (int i = 0; i < f.dim(); ++i) v(i) = f[1u << i];
  return v;
}

/// so(n) matrix of a 2-form: v |-> v -| alpha.
template <class S>
MatX<S> so_matrix(const Form<S>& alpha) {
  const int n = alpha.dim();
  MatX<S> m = MatX<S>::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    Form<S> col = interior(i, alpha);
    for (int j = 0; j < n; ++j) m(j, i - 1) = col[1u << j];
  }
  return m;
}

/// 2-form of an antisymmetric matrix (inverse of so_matrix).
template <class S>
Form<S> two_form_of_matrix(const MatX<S>& m) {
  const int n = static_cast<int>(m.rows());
  Form<S> alpha(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      alpha[(1u << (i - 1)) | (1u << (j - 1))] = m(j - 1, i - 1);
  return alpha;
}

/// Derivation extension of a linear map to multivectors: each blade slot is
/// replaced by its image in turn. For antisymmetric a this is the so(n)
/// action on forms under the frame identification e_i <-> e^i.
template <class S>
Form<S> derivation_on_form(const MatX<S>& a, const Form<S>& omega) {
  Form<S> out(omega.dim());
  for (std::uint32_t m : omega.support()) {
    for (int i = 0; i < omega.dim(); ++i) {
      if (!(m & (1u << i))) continue;
      // replace e_{i+1} by a*e_{i+1} inside the blade
      for (int j = 0; j < omega.dim(); ++j) {
        if (scalar_traits<S>::is_zero(a(j, i), 0.0)) continue;
        if (m & (1u << j) && j != i) continue;
        if (j == i) {
          out[m] += omega[m] * a(i, i);  // zero for antisymmetric a
          continue;
        }
        std::uint32_t stripped = m ^ (1u << i);
        int sign = std::popcount(stripped & ((1u << i) - 1)) & 1 ? -1 : 1;
        int sign2 = std::popcount(stripped & ((1u << j) - 1)) & 1 ? -1 : 1;
        S term = omega[m] * a(j, i);
        if (sign * sign2 < 0) term = -term;
        out[stripped | (1u << j)] += term;
      }
    }
  }
  return out;
}

/// so(n) action of a 2-form on a multivector.
template <class S>
Form<S> so_act_on_form(const Form<S>& alpha, const Form<S>& omega) {
  return derivation_on_form(so_matrix(alpha), omega);
}

}  // namespace torsionforge

#endif
