#ifndef TORSIONFORGE_LINALG_HPP
#define TORSIONFORGE_LINALG_HPP

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "torsionforge/scalar.hpp"

namespace torsionforge {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatQ = MatX<Rational>;
using VecQ = VecX<Rational>;
using MatQC = MatX<RationalComplex>;
using VecQC = VecX<RationalComplex>;

/// Row echelon with full row reduction (Gauss-Jordan). Works for exact and
/// floating scalars; `tol` is ignored in the exact case. Returns pivot
/// columns; `m` is reduced in place.
template <class S>
std::vector<int> reduce_to_rref(MatX<S>& m, double tol = 1e-12) {
  using traits = scalar_traits<S>;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = -1;
    double best_size = tol;
    for (int i = r; i < rows; ++i) {
      double size = traits::pivot_size(m(i, c));
      if (!traits::is_zero(m(i, c), tol) && (best < 0 || size > best_size)) {
        best = i;
        best_size = size;
      }
    }
    if (best < 0) continue;
    m.row(r).swap(m.row(best));
    S inv_pivot = S(1) / m(r, c);
    m.row(r) *= inv_pivot;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      if (!traits::is_zero(m(i, c), tol)) {
        S factor = m(i, c);
        m.row(i) -= factor * m.row(r);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class S>
int rank(MatX<S> m, double tol = 1e-12) {
  return static_cast<int>(reduce_to_rref(m, tol).size());
}

/// Columns of the returned matrix span the kernel of `m`.
template <class S>
MatX<S> kernel_basis(MatX<S> m, double tol = 1e-12) {
  const int cols = static_cast<int>(m.cols());
  std::vector<int> pivots = reduce_to_rref(m, tol);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  const int dim = cols - static_cast<int>(pivots.size());
  MatX<S> basis = MatX<S>::Zero(cols, dim);
  int out = 0;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    basis(free, out) = S(1);
    for (std::size_t pr = 0; pr < pivots.size(); ++pr)
      basis(pivots[pr], out) = -m(static_cast<int>(pr), free);
    ++out;
  }
  return basis;
}

/// Solves m x = b, reporting inconsistency as nullopt. When the system is
/// underdetermined, free variables are set to zero.
template <class S>
std::optional<VecX<S>> solve_consistent(MatX<S> m, VecX<S> b, double tol = 1e-12) {
  using traits = scalar_traits<S>;
  const int cols = static_cast<int>(m.cols());
  MatX<S> aug(m.rows(), cols + 1);
  aug.leftCols(cols) = m;
  aug.col(cols) = b;
  std::vector<int> pivots = reduce_to_rref(aug, tol);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;  // row [0 ... 0 | 1]
  VecX<S> x = VecX<S>::Zero(cols);
  for (std::size_t pr = 0; pr < pivots.size(); ++pr) x(pivots[pr]) = aug(static_cast<int>(pr), cols);
  if constexpr (!traits::exact) {
    double resid = 0, scale = 0;
    VecX<S> r = m * x - b;
    for (int i = 0; i < r.size(); ++i) resid = std::max(resid, traits::pivot_size(r(i)));
    for (int i = 0; i < b.size(); ++i) scale = std::max(scale, traits::pivot_size(b(i)));
    if (resid > tol * std::max(1.0, scale) * 1e3) return std::nullopt;
  }
  return x;
}

/// Incremental independent-span tracker used by Lie-closure loops.
template <class S>
class SpanBuilder {
public:
  explicit SpanBuilder(int ambient_dim, double tol = 1e-12)
      : ambient_(ambient_dim), tol_(tol), rows_(0), m_(MatX<S>::Zero(0, ambient_dim)) {}

  /// Returns true (and extends the span) iff v is independent of the span.
  bool add(const VecX<S>& v) {
    using traits = scalar_traits<S>;
    VecX<S> w = v;
    for (int r = 0; r < rows_; ++r) {
      if (!traits::is_zero(w(pivot_[r]), tol_)) {
        S factor = w(pivot_[r]);
        w -= factor * m_.row(r).transpose();
      }
    }
    int lead = -1;
    double best = tol_;
    for (int c = 0; c < ambient_; ++c) {
      double size = traits::pivot_size(w(c));
      if (!traits::is_zero(w(c), tol_) && (lead < 0 || size > best)) {
        lead = c;
        best = size;
      }
    }
    if (lead < 0) return false;
    w /= w(lead);
    for (int r = 0; r < rows_; ++r) {
      if (!traits::is_zero(m_(r, lead), tol_)) {
        S factor = m_(r, lead);
        m_.row(r) -= factor * w.transpose();
      }
    }
    m_.conservativeResize(rows_ + 1, ambient_);
    m_.row(rows_) = w.transpose();
    pivot_.push_back(lead);
    ++rows_;
    return true;
  }

  bool contains(const VecX<S>& v) const {
    using traits = scalar_traits<S>;
    VecX<S> w = v;
    for (int r = 0; r < rows_; ++r) {
      if (!traits::is_zero(w(pivot_[r]), tol_)) {
        S factor = w(pivot_[r]);
        w -= factor * m_.row(r).transpose();
      }
    }
    for (int c = 0; c < ambient_; ++c)
      if (!traits::is_zero(w(c), tol_)) return false;
    return true;
  }

  int dim() const { return rows_; }
  const MatX<S>& reduced_rows() const { return m_; }

private:
  int ambient_;
  double tol_;
  int rows_;
  MatX<S> m_;
  std::vector<int> pivot_;
};

/// Joint kernel of a family of operators acting on a common carrier space.
template <class S>
MatX<S> joint_kernel(const std::vector<MatX<S>>& ops, double tol = 1e-12) {
  if (ops.empty()) return MatX<S>();
  const int n = static_cast<int>(ops.front().cols());
  MatX<S> stacked(static_cast<int>(ops.size()) * ops.front().rows(), n);
  for (std::size_t k = 0; k < ops.size(); ++k)
    stacked.middleRows(static_cast<int>(k) * ops.front().rows(), ops.front().rows()) = ops[k];
  return kernel_basis<S>(std::move(stacked), tol);
}

template <class S>
MatX<S> kron(const MatX<S>& a, const MatX<S>& b) {
  MatX<S> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = b * a(i, j);
  return out;
}

template <class S>
MatX<S> conjugate_transpose(const MatX<S>& m) {
  MatX<S> out(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(j, i) = conj(m(i, j));
  return out;
}

}  // namespace torsionforge

#endif
