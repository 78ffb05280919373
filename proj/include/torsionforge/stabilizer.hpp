#ifndef TORSIONFORGE_STABILIZER_HPP
#define TORSIONFORGE_STABILIZER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "torsionforge/clifford.hpp"
#include "torsionforge/form.hpp"
#include "torsionforge/linalg.hpp"

namespace torsionforge {

/// A linear action of an ambient Lie algebra on a carrier space. The ambient
/// basis may carry optional data used for bracket checks and trace forms.
template <class S>
struct RepAction {
  std::vector<MatX<S>> ops;               // action matrix per ambient basis element
  std::vector<MatX<S>> defining;          // same elements in a faithful defining rep (optional)
  int carrier_dim() const { return ops.empty() ? 0 : static_cast<int>(ops.front().rows()); }
  int ambient_dim() const { return static_cast<int>(ops.size()); }
};

template <class S>
struct StabilizerResult {
  MatX<S> basis;  // columns = ambient coefficient vectors
  int dimension = 0;
};

/// Full solution space of { a in ambient : action(a)(target) = 0 }.
template <class S, class CS>
StabilizerResult<S> stabilizer(const std::vector<MatX<CS>>& ops, const VecX<CS>& target, double tol = 1e-12) {
  const int na = static_cast<int>(ops.size());
  const int nc = static_cast<int>(target.size());
  MatX<CS> m(nc, na);
  for (int a = 0; a < na; ++a) m.col(a) = ops[a] * target;
  // Coefficients are real: split into real and imaginary equations.
  MatX<S> re(2 * nc, na);
  for (int r = 0; r < nc; ++r)
    for (int a = 0; a < na; ++a) {
      re(2 * r, a) = real(m(r, a));
      re(2 * r + 1, a) = imag(m(r, a));
    }
  StabilizerResult<S> out;
  out.basis = kernel_basis<S>(std::move(re), tol);
  out.dimension = static_cast<int>(out.basis.cols());
  return out;
}

/// Joint annihilator of several targets under one action.
template <class S, class CS>
StabilizerResult<S> stabilizer_joint(const std::vector<MatX<CS>>& ops, const std::vector<VecX<CS>>& targets,
                                     double tol = 1e-12) {
  const int na = static_cast<int>(ops.size());
  int nc = 0;
  for (const auto& t : targets) nc += static_cast<int>(t.size());
  MatX<S> re(2 * nc, na);
  int row = 0;
  for (const auto& t : targets) {
    for (int a = 0; a < na; ++a) {
      VecX<CS> v = ops[a] * t;
      for (int r = 0; r < t.size(); ++r) {
        re(row + 2 * r, a) = real(v(r));
        re(row + 2 * r + 1, a) = imag(v(r));
      }
    }
    row += 2 * static_cast<int>(t.size());
  }
  StabilizerResult<S> out;
  out.basis = kernel_basis<S>(std::move(re), tol);
  out.dimension = static_cast<int>(out.basis.cols());
  return out;
}

/// Dimension of the joint kernel of the listed operators.
template <class CS>
int invariant_multiplicity(const std::vector<MatX<CS>>& ops, double tol = 1e-12) {
  if (ops.empty()) throw std::invalid_argument("invariant_multiplicity: empty operator list");
  return static_cast<int>(joint_kernel<CS>(ops, tol).cols());
}

/// Lie closure of a set of Clifford-algebra elements under the commutator
/// [a,b] = ab - ba. Terminates because the ambient algebra is
/// finite-dimensional. Returns the closed basis.
template <class S>
std::vector<Form<S>> lie_closure(const std::vector<Form<S>>& generators, double tol = 1e-12) {
  if (generators.empty()) return {};
  const int n = generators.front().dim();
  SpanBuilder<S> span(1 << n, tol);
  std::vector<Form<S>> basis;
  auto try_add = [&](const Form<S>& f) {
    if (span.add(f.coeffs())) {
      basis.push_back(f);
      return true;
    }
    return false;
  };
  for (const auto& g : generators) try_add(g);
  // Process queue: every unordered pair is bracketed once, when its later
  // member is processed.
  std::size_t processed = 0;
  while (processed < basis.size()) {
    for (std::size_t j = 0; j < processed; ++j) try_add(commutator(basis[processed], basis[j]));
    ++processed;
  }
  return basis;
}

/// Derived algebra [g, g] of a bracket-closed span, itself closed.
template <class S>
std::vector<Form<S>> derived_algebra(const std::vector<Form<S>>& basis, double tol = 1e-12) {
  std::vector<Form<S>> brackets;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) brackets.push_back(commutator(basis[i], basis[j]));
  return lie_closure(brackets, tol);
}

/// Checks that the span of `basis` is closed under the commutator.
template <class S>
bool bracket_closed(const std::vector<Form<S>>& basis, double tol = 1e-12) {
  if (basis.empty()) return true;
  const int n = basis.front().dim();
  SpanBuilder<S> span(1 << n, tol);
  for (const auto& b : basis) span.add(b.coeffs());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!span.contains(commutator(basis[i], basis[j]).coeffs())) return false;
  return true;
}

struct IsotypicBlock {
  double eigenvalue = 0;
  double refinement = 0;  // eigenvalue of the center Casimir when one is used
  int dimension = 0;
};

namespace detail {

inline std::vector<IsotypicBlock> cluster_eigenvalues(std::vector<double> ev, double tol) {
  std::sort(ev.begin(), ev.end());
  std::vector<IsotypicBlock> blocks;
  for (double v : ev) {
    if (!blocks.empty() && std::abs(v - blocks.back().eigenvalue) < tol)
      blocks.back().dimension++;
    else
      blocks.push_back({v, 0.0, 1});
  }
  return blocks;
}

inline Rational rationalize(double x, long long max_den = 1000000) {
  // continued-fraction best approximation
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(v);
    long long a = static_cast<long long>(fl);
    long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = v - fl;
    if (std::abs(frac) < 1e-12) break;
    v = 1.0 / frac;
  }
  return q1 == 0 ? Rational(0) : Rational(p1, q1);
}

}  // namespace detail

/// Eigenspace dimensions of a Casimir-type symmetric operator. For exact
/// scalars the candidate eigenvalues are rationalized and certified by exact
/// kernel ranks summing to the carrier dimension.
template <class S>
std::vector<IsotypicBlock> casimir_spectrum(const MatX<S>& casimir, double cluster_tol = 1e-7) {
  const int n = static_cast<int>(casimir.rows());
  Eigen::MatrixXd cd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cd(i, j) = to_double(casimir(i, j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((cd + cd.transpose()) / 2.0);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  auto blocks = detail::cluster_eigenvalues(ev, cluster_tol);
  if constexpr (scalar_traits<S>::exact) {
    int total = 0;
    std::vector<IsotypicBlock> certified;
    for (const auto& b : blocks) {
      Rational lambda = detail::rationalize(b.eigenvalue);
      MatX<S> shifted = casimir;
      for (int i = 0; i < n; ++i) shifted(i, i) -= S(scalar_traits<S>::from_rational(lambda));
      int dim = n - rank<S>(shifted);
      certified.push_back({lambda.to_double(), 0.0, dim});
      total += dim;
    }
    if (total != n) throw std::runtime_error("casimir_spectrum: exact certification failed (defective or irrational spectrum)");
    return certified;
  }
  return blocks;
}

/// Casimir operator sum_a rho(a) rho(a~) with a~ the trace-form dual basis
/// of the defining representation.
template <class S>
MatX<S> casimir_from_ops(const std::vector<MatX<S>>& defining, const std::vector<MatX<S>>& rho,
                         double tol = 1e-12) {
  const int k = static_cast<int>(defining.size());
  if (k == 0 || rho.size() != defining.size()) throw std::invalid_argument("casimir_from_ops: basis mismatch");
  MatX<S> gram(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) gram(a, b) = (defining[a] * defining[b]).trace();
  const int nc = static_cast<int>(rho.front().rows());
  MatX<S> cas = MatX<S>::Zero(nc, nc);
  for (int b = 0; b < k; ++b) {
    VecX<S> e = VecX<S>::Zero(k);
    e(b) = S(1);
    auto col = solve_consistent<S>(gram, e, tol);
    if (!col) throw std::invalid_argument("casimir_from_ops: degenerate trace form");
    MatX<S> dual = MatX<S>::Zero(nc, nc);
    for (int a = 0; a < k; ++a)
      if (!scalar_traits<S>::is_zero((*col)(a), tol)) dual += rho[a] * (*col)(a);
    cas += rho[b] * dual;
  }
  return cas;
}

/// Casimir of a subalgebra given by 2-forms, acting on a carrier.
template <class S>
MatX<S> casimir_operator(const std::vector<Form<S>>& subalgebra,
                         const std::function<MatX<S>(const Form<S>&)>& carrier_action, double tol = 1e-12) {
  std::vector<MatX<S>> def, rho;
  def.reserve(subalgebra.size());
  rho.reserve(subalgebra.size());
  for (const auto& a : subalgebra) {
    def.push_back(so_matrix(a));
    rho.push_back(carrier_action(a));
  }
  return casimir_from_ops<S>(def, rho, tol);
}

/// Center of the span of the defining matrices, as coefficient vectors.
template <class S>
MatX<S> algebra_center(const std::vector<MatX<S>>& defining, double tol = 1e-12) {
  const int k = static_cast<int>(defining.size());
  const int n = static_cast<int>(defining.front().rows());
  MatX<S> sys(k * n * n, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      MatX<S> br = defining[a] * defining[b] - defining[b] * defining[a];
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) sys(b * n * n + r * n + c, a) = br(r, c);
    }
  return kernel_basis<S>(std::move(sys), tol);
}

/// Isotypic eigenspace dimensions of the Casimir action, refined by the
/// Casimir of the center whenever different isotypic components happen to
/// share a Casimir eigenvalue. Exact scalars certify every dimension by
/// rational kernel ranks.
template <class S>
std::vector<IsotypicBlock> isotypic_blocks(const std::vector<MatX<S>>& defining, const std::vector<MatX<S>>& rho,
                                           double tol = 1e-12, double cluster_tol = 1e-7) {
  const int n = static_cast<int>(rho.front().rows());
  MatX<S> cas = casimir_from_ops<S>(defining, rho, tol);
  MatX<S> cas2 = MatX<S>::Zero(n, n);
  bool have_center = false;
  {
    MatX<S> center = algebra_center<S>(defining, tol);
    if (center.cols() > 0 && center.cols() < static_cast<int>(defining.size())) {
      std::vector<MatX<S>> cdef, crho;
      for (int c = 0; c < center.cols(); ++c) {
        MatX<S> d = MatX<S>::Zero(defining.front().rows(), defining.front().cols());
        MatX<S> r = MatX<S>::Zero(n, n);
        for (std::size_t a = 0; a < defining.size(); ++a) {
          d += defining[a] * center(static_cast<int>(a), c);
          r += rho[a] * center(static_cast<int>(a), c);
        }
        cdef.push_back(d);
        crho.push_back(r);
      }
      cas2 = casimir_from_ops<S>(cdef, crho, tol);
      have_center = true;
    }
  }

  // float stage: two-step joint diagonalization for candidates
  Eigen::MatrixXd cd(n, n), c2d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cd(i, j) = to_double(cas(i, j));
      c2d(i, j) = have_center ? to_double(cas2(i, j)) : 0.0;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((cd + cd.transpose()) / 2.0);
  struct Cand {
    double ev1, ev2;
    int mult;
  };
  std::vector<Cand> cands;
  {
    int i = 0;
    while (i < n) {
      int j = i;
      while (j < n && std::abs(es.eigenvalues()(j) - es.eigenvalues()(i)) < cluster_tol) ++j;
      Eigen::MatrixXd u = es.eigenvectors().middleCols(i, j - i);
      if (!have_center) {
        cands.push_back({es.eigenvalues()(i), 0.0, j - i});
      } else {
        Eigen::MatrixXd sub = u.transpose() * c2d * u;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2((sub + sub.transpose()) / 2.0);
        int a = 0;
        while (a < sub.rows()) {
          int b = a;
          while (b < sub.rows() && std::abs(es2.eigenvalues()(b) - es2.eigenvalues()(a)) < cluster_tol) ++b;
          cands.push_back({es.eigenvalues()(i), es2.eigenvalues()(a), b - a});
          a = b;
        }
      }
      i = j;
    }
  }

  std::vector<IsotypicBlock> out;
  if constexpr (scalar_traits<S>::exact) {
    int total = 0;
    for (const auto& c : cands) {
      Rational l1 = detail::rationalize(c.ev1);
      Rational l2 = detail::rationalize(c.ev2);
      MatX<S> stacked(have_center ? 2 * n : n, n);
      MatX<S> s1 = cas;
      for (int i = 0; i < n; ++i) s1(i, i) -= scalar_traits<S>::from_rational(l1);
      stacked.topRows(n) = s1;
      if (have_center) {
        MatX<S> s2 = cas2;
        for (int i = 0; i < n; ++i) s2(i, i) -= scalar_traits<S>::from_rational(l2);
        stacked.bottomRows(n) = s2;
      }
      int dim = static_cast<int>(kernel_basis<S>(std::move(stacked), tol).cols());
      out.push_back({l1.to_double(), l2.to_double(), dim});
      total += dim;
    }
    if (total != n)
      throw std::runtime_error("isotypic_blocks: exact certification failed (defective or irrational spectrum)");
  } else {
    for (const auto& c : cands) out.push_back({c.ev1, c.ev2, c.mult});
  }
  return out;
}

/// Exact isotypic content of an so(3)-representation from the weight
/// multiplicities of a rational generator matrix L (eigenvalues i k, k
/// integer): mult(spin l) = m_l - m_{l+1}.
inline std::vector<std::pair<int, int>> so3_weight_content(const MatQ& l, int lmax) {
  std::vector<int> m(lmax + 2, 0);
  const int n = static_cast<int>(l.rows());
  MatQ l2 = l * l;
  m[0] = n - rank<Rational>(MatQ(l));
  for (int k = 1; k <= lmax; ++k) {
    MatQ shifted = l2 + MatQ::Identity(n, n) * Rational(k * k);
    m[k] = (n - rank<Rational>(shifted)) / 2;
  }
  std::vector<std::pair<int, int>> content;
  for (int k = 0; k <= lmax; ++k) {
    int mult = m[k] - m[k + 1];
    if (mult > 0) content.push_back({k, mult});
  }
  return content;
}

}  // namespace torsionforge

#endif
