#ifndef TORSIONFORGE_CLIFFORD_HPP
#define TORSIONFORGE_CLIFFORD_HPP

#include <array>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "torsionforge/form.hpp"
#include "torsionforge/linalg.hpp"
#include "torsionforge/scalar.hpp"

namespace torsionforge {

template <class CS>
CS imaginary_unit();
template <>
inline std::complex<double> imaginary_unit() { return {0.0, 1.0}; }
template <>
inline RationalComplex imaginary_unit() { return {Rational(0), Rational(1)}; }

/// Concrete spin representation: generators gamma_1..gamma_n of size
/// 2^floor(n/2) (complex construction) satisfying
/// gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij.
template <class CS>
struct GammaRep {
  int n = 0;
  std::vector<MatX<CS>> gamma;

  int spinor_dim() const { return gamma.empty() ? 0 : static_cast<int>(gamma.front().rows()); }
};

namespace detail {
using torsionforge::kron;
}  // namespace detail

/// Deterministic doubling construction of the complex spin representation.
/// Base blocks: k1 = [[0,i],[i,0]], k2 = [[0,1],[-1,0]], grading t = -i k1 k2;
/// new generators attach as id (x) k, old ones extend as gamma (x) t. In odd
/// dimension the last generator is i^{k+1} gamma_1...gamma_2k.
template <class CS>
GammaRep<CS> build_gamma_rep(int n) {
  if (n < 1 || n > kMaxFormDim) throw std::invalid_argument("build_gamma_rep: dimension out of supported range");
  const CS i = imaginary_unit<CS>();
  MatX<CS> k1(2, 2), k2(2, 2), t(2, 2);
  k1 << CS(0), i, i, CS(0);
  k2 << CS(0), CS(1), CS(-1), CS(0);
  t << CS(-1), CS(0), CS(0), CS(1);

  GammaRep<CS> rep;
  rep.n = n;
  const int pairs = n / 2;
  if (pairs == 0) {
    // n = 1: one-dimensional spinors, gamma_1 = [i]
    MatX<CS> g(1, 1);
    g(0, 0) = i;
    rep.gamma.push_back(g);
    return rep;
  }
  std::vector<MatX<CS>> g{k1, k2};
  for (int p = 2; p <= pairs; ++p) {
    MatX<CS> id = MatX<CS>::Identity(1 << (p - 1), 1 << (p - 1));
    std::vector<MatX<CS>> next;
    next.reserve(2 * p);
    for (auto& old : g) next.push_back(detail::kron(old, t));
    next.push_back(detail::kron(id, k1));
    next.push_back(detail::kron(id, k2));
    g = std::move(next);
  }
  if (n % 2 == 1) {
    MatX<CS> prod = MatX<CS>::Identity(1 << pairs, 1 << pairs);
    for (auto& gi : g) prod = prod * gi;
    CS c(1);
    for (int e = 0; e < (pairs + 1) % 4; ++e) c = c * i;
    g.push_back(prod * c);
  }
  rep.gamma = std::move(g);
  return rep;
}

/// gamma_{i1} ... gamma_{ik} for the blade given as a bitmask.
template <class CS>
MatX<CS> blade_matrix(const GammaRep<CS>& rep, std::uint32_t mask) {
  const int N = rep.spinor_dim();
  MatX<CS> out = MatX<CS>::Identity(N, N);
  for (int i = 0; i < rep.n; ++i)
    if (mask & (1u << i)) out = out * rep.gamma[i];
  return out;
}

/// Clifford action of a multivector on spinors: blades act as ordered gamma
/// products, extended linearly.
template <class CS>
MatX<CS> form_action_matrix(const GammaRep<CS>& rep, const Form<Rational>& f) {
  if (f.dim() != rep.n) throw std::invalid_argument("form_action_matrix: dimension mismatch");
  const int N = rep.spinor_dim();
  MatX<CS> out = MatX<CS>::Zero(N, N);
  for (std::uint32_t m : f.support()) out += blade_matrix(rep, m) * scalar_traits<CS>::from_rational(f[m]);
  return out;
}

inline MatX<std::complex<double>> form_action_matrix(const GammaRep<std::complex<double>>& rep,
                                                     const Form<double>& f) {
  if (f.dim() != rep.n) throw std::invalid_argument("form_action_matrix: dimension mismatch");
  const int N = rep.spinor_dim();
  MatX<std::complex<double>> out = MatX<std::complex<double>>::Zero(N, N);
  for (std::uint32_t m : f.support()) out += blade_matrix(rep, m) * std::complex<double>(f[m], 0.0);
  return out;
}

template <class CS, class S>
VecX<CS> form_action_on_spinor(const GammaRep<CS>& rep, const Form<S>& f, const VecX<CS>& psi) {
  if (psi.size() != rep.spinor_dim()) throw std::invalid_argument("form_action_on_spinor: spinor length mismatch");
  return form_action_matrix(rep, f) * psi;
}

/// Spin lift of a 2-form: alpha acts on spinors as gamma(alpha)/2.
template <class CS, class S>
MatX<CS> spin_matrix(const GammaRep<CS>& rep, const Form<S>& alpha) {
  MatX<CS> m = form_action_matrix(rep, alpha);
  return m / CS(2);
}

/// Complex volume element i^{n/2} gamma_1...gamma_n (even n); its +-1
/// eigenprojectors split Delta_n into half-spinor spaces.
template <class CS>
MatX<CS> complex_volume(const GammaRep<CS>& rep) {
  if (rep.n % 2 != 0) throw std::invalid_argument("complex_volume: even dimension required");
  MatX<CS> v = blade_matrix(rep, (1u << rep.n) - 1);
  CS c(1);
  const CS i = imaginary_unit<CS>();
  for (int e = 0; e < (rep.n / 2) % 4; ++e) c = c * i;
  return v * c;
}

// ---------------------------------------------------------------------------
// Octonion model: a real form of Cl(7) and Cl(8) with rational entries.
// ---------------------------------------------------------------------------

/// Multiplication table of a Cayley-Dickson algebra of dimension 2^k over R:
/// basis e_0 = 1, imaginary e_1..e_{2^k-1}; table(i,j) = (index, sign) with
/// e_i e_j = sign e_index.
class CayleyDickson {
public:
  explicit CayleyDickson(int k) {
    dim_ = 1 << k;
    idx_.assign(dim_ * dim_, 0);
    sgn_.assign(dim_ * dim_, 1);
    build(k);
  }

  int dim() const { return dim_; }
  int index(int i, int j) const { return idx_[i * dim_ + j]; }
  int sign(int i, int j) const { return sgn_[i * dim_ + j]; }

  /// Left multiplication matrix L_{e_i}.
  MatQ left_mult(int i) const {
    MatQ m = MatQ::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j) m(index(i, j), j) = Rational(sign(i, j));
    return m;
  }

private:
  void build(int k) {
    // dim 1: reals
    std::vector<int> idx{0}, sgn{1};
    int d = 1;
    for (int step = 0; step < k; ++step) {
      int nd = 2 * d;
      std::vector<int> ni(nd * nd), ns(nd * nd);
      auto conj_sign = [&](int i) { return i == 0 ? 1 : -1; };
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) {
          int out_idx, out_sgn;
          if (i < d && j < d) {  // (a,0)(c,0) = (ac, 0)
            out_idx = idx[i * d + j];
            out_sgn = sgn[i * d + j];
          } else if (i < d) {  // (a,0)(0,d') = (0, d'a)
            int jj = j - d;
            out_idx = d + idx[jj * d + i];
            out_sgn = sgn[jj * d + i];
          } else if (j < d) {  // (0,b)(c,0) = (0, b conj(c))
            int ii = i - d;
            out_idx = d + idx[ii * d + j];
            out_sgn = sgn[ii * d + j] * conj_sign(j);
          } else {  // (0,b)(0,d') = (-conj(d') b, 0)
            int ii = i - d, jj = j - d;
            out_idx = idx[jj * d + ii];
            out_sgn = -sgn[jj * d + ii] * conj_sign(jj);
          }
          ni[i * nd + j] = out_idx;
          ns[i * nd + j] = out_sgn;
        }
      idx = std::move(ni);
      sgn = std::move(ns);
      d = nd;
    }
    idx_ = std::move(idx);
    sgn_ = std::move(sgn);
  }

  int dim_;
  std::vector<int> idx_;
  std::vector<int> sgn_;
};

/// Real spin representation of Cl(7) on R^8 (octonions): gamma_i = -L_{e_i}.
inline GammaRep<Rational> build_real_clifford7() {
  CayleyDickson oct(3);
  GammaRep<Rational> rep;
  rep.n = 7;
  for (int i = 1; i <= 7; ++i) rep.gamma.push_back(MatQ(-oct.left_mult(i)));
  return rep;
}

/// Real spin representation of Cl(8) on R^16 = O + O:
/// gamma(x)(a,b) = (x b, -conj(x) a); gamma_8 uses the real unit.
inline GammaRep<Rational> build_real_clifford8() {
  CayleyDickson oct(3);
  GammaRep<Rational> rep;
  rep.n = 8;
  auto make = [&](int unit, int conj_sign) {
    MatQ l = oct.left_mult(unit);
    MatQ g = MatQ::Zero(16, 16);
    g.block(0, 8, 8, 8) = l;
    g.block(8, 0, 8, 8) = -l * Rational(conj_sign);
    return g;
  };
  for (int i = 1; i <= 7; ++i) rep.gamma.push_back(make(i, -1));
  rep.gamma.push_back(make(0, 1));
  return rep;
}

/// Real volume element gamma_1...gamma_8; block diagonal, eigenvalues +-1 on
/// the two octonion summands.
inline MatQ real_volume8(const GammaRep<Rational>& rep) {
  MatQ v = MatQ::Identity(16, 16);
  for (const auto& g : rep.gamma) v = v * g;
  return v;
}

}  // namespace torsionforge

#endif
