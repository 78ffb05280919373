#ifndef TORSIONFORGE_CONNECTION_HPP
#define TORSIONFORGE_CONNECTION_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionforge/clifford.hpp"
#include "torsionforge/form.hpp"
#include "torsionforge/liealg.hpp"
#include "torsionforge/torsion.hpp"

namespace torsionforge {

/// Inverse metric diagonal; the tensor layer supports diagonal metrics only.
template <class S>
VecX<S> inverse_metric_diagonal(const LieAlgebraData<S>& data, double tol = 1e-12) {
  const int d = data.dim_m();
  VecX<S> g(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j)
      if (i != j && !scalar_traits<S>::is_zero(data.metric_m(i, j), tol))
        throw std::invalid_argument("tensor layer requires a diagonal metric on m");
    g(i) = S(1) / data.metric_m(i, i);
  }
  return g;
}

/// Invariant connection in Nomizu form: Lambda[i] is the endomorphism of m
/// given by covariant derivative along e_i.
template <class S>
struct ConnectionData {
  std::vector<MatX<S>> lambda;
  TorsionTensor<S> torsion;  // (3,0): T(X,Y,Z) = <T(X,Y), Z>_g
  bool metric = false;

  int dim() const { return static_cast<int>(lambda.size()); }
};

/// Torsion tensor of a Nomizu map: T(X,Y) = Lambda_X Y - Lambda_Y X - [X,Y]_m.
template <class S>
TorsionTensor<S> torsion_of(const std::vector<MatX<S>>& lambda, const LieAlgebraData<S>& data) {
  const int d = data.dim_m();
  TorsionTensor<S> t(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      VecX<S> v = lambda[i].col(j) - lambda[j].col(i) - data.bracket_m(i, j);
      VecX<S> w = data.metric_m * v;
      for (int k = 0; k < d; ++k) t.set(i, j, k, w(k));
    }
  return t;
}

template <class S>
bool connection_metric(const std::vector<MatX<S>>& lambda, const LieAlgebraData<S>& data, double tol = 1e-12) {
  for (const auto& l : lambda) {
    MatX<S> skew = data.metric_m * l + l.transpose() * data.metric_m;
    for (int a = 0; a < skew.rows(); ++a)
      for (int b = 0; b < skew.cols(); ++b)
        if (!scalar_traits<S>::is_zero(skew(a, b), tol)) return false;
  }
  return true;
}

template <class S>
ConnectionData<S> make_connection(std::vector<MatX<S>> lambda, const LieAlgebraData<S>& data,
                                  double tol = 1e-12) {
  ConnectionData<S> c;
  c.lambda = std::move(lambda);
  c.torsion = torsion_of(c.lambda, data);
  c.metric = connection_metric(c.lambda, data, tol);
  return c;
}

/// Levi-Civita connection of the invariant metric:
/// Lambda(X)Y = 1/2 [X,Y]_m + U(X,Y),
/// 2 <U(X,Y),Z> = <[Z,X]_m, Y> + <X, [Z,Y]_m>.
template <class S>
ConnectionData<S> koszul_levi_civita(const LieAlgebraData<S>& data, double tol = 1e-12) {
  const int d = data.dim_m();
  if (rank<S>(data.metric_m, tol) != d) throw std::invalid_argument("koszul_levi_civita: degenerate metric");
  const S half = S(1) / S(2);
  std::vector<MatX<S>> lambda(d, MatX<S>::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    MatX<S> rhs(d, d);  // rhs(k, j) = <Lambda_i e_j, e_k>_G
    for (int j = 0; j < d; ++j) {
      VecX<S> br = data.metric_m * data.bracket_m(i, j);
      for (int k = 0; k < d; ++k) {
        VecX<S> ej = VecX<S>::Zero(d), ei = VecX<S>::Zero(d);
        ej(j) = S(1);
        ei(i) = S(1);
        S u = data.inner_m(data.bracket_m(k, i), ej) + data.inner_m(ei, data.bracket_m(k, j));
        rhs(k, j) = br(k) * half + u * half;
      }
    }
    for (int j = 0; j < d; ++j) {
      auto col = solve_consistent<S>(data.metric_m, VecX<S>(rhs.col(j)), tol);
      if (!col) throw std::invalid_argument("koszul_levi_civita: metric solve failed");
      lambda[i].col(j) = *col;
    }
  }
  return make_connection(std::move(lambda), data, tol);
}

/// Shifts a connection by half the given totally antisymmetric torsion:
/// Lambda'_X Y = Lambda_X Y + 1/2 T(X,Y,-)^sharp.
template <class S>
ConnectionData<S> with_torsion(const ConnectionData<S>& base, const LieAlgebraData<S>& data,
                               const Form<S>& t3, double tol = 1e-12) {
  const int d = data.dim_m();
  if (t3.dim() != d) throw std::invalid_argument("with_torsion: dimension mismatch");
  VecX<S> ginv = inverse_metric_diagonal(data, tol);
  TorsionTensor<S> tt = TorsionTensor<S>::from_3form(t3);
  std::vector<MatX<S>> lambda = base.lambda;
  const S half = S(1) / S(2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) lambda[i](k, j) += half * ginv(k) * tt(i, j, k);
  return make_connection(std::move(lambda), data, tol);
}

template <class S>
struct CurvatureData {
  std::vector<MatX<S>> endo;  // R(e_i, e_j) as endomorphism, index i*d+j
  std::vector<S> r;           // (4,0) components R(i,j,k,l), flat
  MatX<S> ricci;
  S scal = S(0);

  int d = 0;
  const S& rr(int i, int j, int k, int l) const { return r[((i * d + j) * d + k) * d + l]; }
};

/// Curvature R(X,Y) = [L_X, L_Y] - L_{[X,Y]_m} - ad_m([X,Y]_h),
/// R(i,j,k,l) = <R(e_i,e_j) e_k, e_l>_G, Ric(X,Y) = tr_G R(e_., X, Y, e_.).
template <class S>
CurvatureData<S> curvature(const ConnectionData<S>& conn, const LieAlgebraData<S>& data, double tol = 1e-12) {
  const int d = data.dim_m();
  VecX<S> ginv = inverse_metric_diagonal(data, tol);
  CurvatureData<S> out;
  out.d = d;
  out.endo.assign(d * d, MatX<S>::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      MatX<S> rij = conn.lambda[i] * conn.lambda[j] - conn.lambda[j] * conn.lambda[i];
      VecX<S> brm = data.bracket_m(i, j);
      for (int a = 0; a < d; ++a)
        if (!scalar_traits<S>::is_zero(brm(a), tol)) rij -= conn.lambda[a] * brm(a);
      VecX<S> brh = data.bracket_h(i, j);
      if (data.dim_h() > 0) {
        VecX<S> w = VecX<S>::Zero(data.n);
        for (int a = 0; a < data.dim_h(); ++a) w(data.h[a]) = brh(a);
        rij -= data.ad_on_m(w);
      }
      out.endo[i * d + j] = rij;
    }
  out.r.assign(static_cast<std::size_t>(d) * d * d * d, S(0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      MatX<S> low = data.metric_m * out.endo[i * d + j];
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out.r[((i * d + j) * d + k) * d + l] = low(l, k);
    }
  out.ricci = MatX<S>::Zero(d, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      S acc(0);
      for (int a = 0; a < d; ++a) acc += ginv(a) * out.rr(a, x, y, a);
      out.ricci(x, y) = acc;
    }
  out.scal = S(0);
  for (int i = 0; i < d; ++i) out.scal += ginv(i) * out.ricci(i, i);
  return out;
}

/// Covariant derivative of a covariant antisymmetric tensor given as a Form
/// (coefficients = values on increasing frame tuples):
/// (nabla_i w)(Y...) = - sum_slots w(..., Lambda_i Y_a, ...).
template <class S>
Form<S> covariant_derivative_form(const ConnectionData<S>& conn, int i, const Form<S>& w) {
  return -derivation_on_form(MatX<S>(conn.lambda[i].transpose()), w);
}

/// Same for a torsion tensor (antisymmetric in the first two slots only).
template <class S>
TorsionTensor<S> covariant_derivative_torsion(const ConnectionData<S>& conn, int i, const TorsionTensor<S>& t) {
  const int d = t.dim();
  TorsionTensor<S> out(d);
  const MatX<S>& l = conn.lambda[i];
  for (int x = 0; x < d; ++x)
    for (int y = x + 1; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        S acc(0);
        for (int p = 0; p < d; ++p) {
          acc -= l(p, x) * t(p, y, z);
          acc -= l(p, y) * t(x, p, z);
          acc -= l(p, z) * t(x, y, p);
        }
        out.set(x, y, z, acc);
      }
  return out;
}

/// d of an invariant form on the reductive space:
/// (dw)(X_0..X_r) = sum_{p<q} (-1)^{p+q} w([X_p,X_q]_m, X_0..^p..^q..X_r).
template <class S>
Form<S> invariant_exterior_derivative(const Form<S>& w, const LieAlgebraData<S>& data) {
  const int d = data.dim_m();
  if (w.dim() != d) throw std::invalid_argument("invariant_exterior_derivative: dimension mismatch");
  int k = w.homogeneous_grade();
  if (k < 0) {
    if (w.is_zero()) return Form<S>(d);
    throw std::invalid_argument("invariant_exterior_derivative: homogeneous input required");
  }
  Form<S> out(d);
  if (k + 1 > d) return out;
  std::vector<int> idx(k + 1);
  // iterate over increasing (k+1)-tuples via bitmasks
  for (std::uint32_t m = 0; m < (1u << d); ++m) {
    if (std::popcount(m) != k + 1) continue;
    int c = 0;
    for (int b = 0; b < d; ++b)
      if (m & (1u << b)) idx[c++] = b;
    S val(0);
    for (int p = 0; p <= k; ++p)
      for (int q = p + 1; q <= k; ++q) {
        VecX<S> br = data.bracket_m(idx[p], idx[q]);
        std::vector<int> rest;
        for (int a = 0; a <= k; ++a)
          if (a != p && a != q) rest.push_back(idx[a]);
        for (int r = 0; r < d; ++r) {
          if (scalar_traits<S>::is_zero(br(r), 0.0)) continue;
          std::vector<int> args{r + 1};
          for (int a : rest) args.push_back(a + 1);
          S term = br(r) * form_eval(w, args);
          if ((p + q) & 1) term = -term;
          val += term;
        }
      }
    out[m] = val;
  }
  return out;
}

/// d computed through a connection and its torsion (the route through
/// covariant derivatives); must agree with the invariant formula.
template <class S>
Form<S> exterior_derivative_via_connection(const Form<S>& w, const ConnectionData<S>& conn,
                                           const LieAlgebraData<S>& data) {
  const int d = data.dim_m();
  int k = w.homogeneous_grade();
  if (k < 0) {
    if (w.is_zero()) return Form<S>(d);
    throw std::invalid_argument("exterior_derivative_via_connection: homogeneous input required");
  }
  Form<S> out(d);
  if (k + 1 > d) return out;
  std::vector<Form<S>> nabla(d);
  for (int i = 0; i < d; ++i) nabla[i] = covariant_derivative_form(conn, i, w);
  VecX<S> ginv = inverse_metric_diagonal(data);
  std::vector<int> idx(k + 1);
  for (std::uint32_t m = 0; m < (1u << d); ++m) {
    if (std::popcount(m) != k + 1) continue;
    int c = 0;
    for (int b = 0; b < d; ++b)
      if (m & (1u << b)) idx[c++] = b;
    S val(0);
    // sum_i (-1)^i (nabla_{X_i} w)(...)
    for (int p = 0; p <= k; ++p) {
      std::vector<int> rest;
      for (int a = 0; a <= k; ++a)
        if (a != p) rest.push_back(idx[a] + 1);
      S term = form_eval(nabla[idx[p]], rest);
      if (p & 1) term = -term;
      val += term;
    }
    // - sum_{p<q} (-1)^{p+q} w(T(X_p, X_q), ...)
    for (int p = 0; p <= k; ++p)
      for (int q = p + 1; q <= k; ++q) {
        VecX<S> tv(d);  // T(X_p, X_q) with the index raised
        for (int r = 0; r < d; ++r) tv(r) = ginv(r) * conn.torsion(idx[p], idx[q], r);
        std::vector<int> rest;
        for (int a = 0; a <= k; ++a)
          if (a != p && a != q) rest.push_back(idx[a]);
        for (int r = 0; r < d; ++r) {
          if (scalar_traits<S>::is_zero(tv(r), 0.0)) continue;
          std::vector<int> args{r + 1};
          for (int a : rest) args.push_back(a + 1);
          S term = tv(r) * form_eval(w, args);
          if ((p + q) & 1) term = -term;
          val -= term;
        }
      }
    out[m] = val;
  }
  return out;
}

/// Codifferential delta^nabla w = - sum_i g^{ii} e_i -| (nabla_{e_i} w).
template <class S>
Form<S> codifferential(const Form<S>& w, const ConnectionData<S>& conn, const LieAlgebraData<S>& data) {
  const int d = data.dim_m();
  VecX<S> ginv = inverse_metric_diagonal(data);
  Form<S> out(d);
  for (int i = 0; i < d; ++i) out -= interior(i + 1, covariant_derivative_form(conn, i, w)) * ginv(i);
  return out;
}

/// Metric-contracted norm of a 3-form (diagonal metric).
template <class S>
S form_norm_squared_g(const Form<S>& t, const VecX<S>& ginv) {
  S acc(0);
  for (std::uint32_t m : t.support()) {
    S w(1);
    for (int b = 0; b < static_cast<int>(ginv.size()); ++b)
      if (m & (1u << b)) w *= ginv(b);
    acc += t[m] * t[m] * w;
  }
  return acc;
}

/// sigma_T as a (4,0) tensor with metric contractions,
/// sigma(X,Y,Z,V) = g(T(X,Y),T(Z,V)) + g(T(Y,Z),T(X,V)) + g(T(Z,X),T(Y,V)).
template <class S>
Form<S> sigma_tensor_g(const TorsionTensor<S>& t, const VecX<S>& ginv) {
  const int d = t.dim();
  Form<S> out(d);
  auto pair_inner = [&](int a, int b, int c, int e) {
    S acc(0);
    for (int k = 0; k < d; ++k) acc += ginv(k) * t(a, b, k) * t(c, e, k);
    return acc;
  };
  for (int x = 0; x < d; ++x)
    for (int y = x + 1; y < d; ++y)
      for (int z = y + 1; z < d; ++z)
        for (int v = z + 1; v < d; ++v)
          out[(1u << x) | (1u << y) | (1u << z) | (1u << v)] =
              pair_inner(x, y, z, v) + pair_inner(y, z, x, v) + pair_inner(z, x, y, v);
  return out;
}

template <class S>
Form<S> torsion_to_form(const TorsionTensor<S>& t) {
  const int d = t.dim();
  Form<S> out(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) out[(1u << i) | (1u << j) | (1u << k)] = t(i, j, k);
  return out;
}

/// delta T as a 2-form: (delta T)(X,Y) = - sum_a g^{aa} (nabla_a T)(a, X, Y)
/// wait: delta T = - sum g^{aa} e_a -| nabla_a T for the 3-form T.
template <class S>
Form<S> torsion_codifferential(const TorsionTensor<S>& t, const ConnectionData<S>& conn,
                               const LieAlgebraData<S>& data) {
  const int d = data.dim_m();
  VecX<S> ginv = inverse_metric_diagonal(data);
  Form<S> out(d);
  for (int a = 0; a < d; ++a) {
    TorsionTensor<S> nt = covariant_derivative_torsion(conn, a, t);
    for (int x = 0; x < d; ++x)
      for (int y = x + 1; y < d; ++y) out[(1u << x) | (1u << y)] -= ginv(a) * nt(a, x, y);
  }
  return out;
}

struct IdentityReport {
  bool curvature_skew_adjoint = true;
  bool scal_relation = true;           // scal^nabla = scal^g - 3/2 ||T||^2
  bool ricci_antisymmetry = true;      // Ric^nabla_[skew] = -1/2 delta T ... see check
  bool first_bianchi = true;
  bool riemann_relation = true;        // full R^g vs R^nabla identity
  bool dT_is_2sigma = true;            // only checked when nabla T = 0
  bool nabla_t_zero = false;
  double max_residual = 0.0;

  bool all() const {
    return curvature_skew_adjoint && scal_relation && ricci_antisymmetry && first_bianchi && riemann_relation &&
           dT_is_2sigma;
  }
};

/// Verifies the standard curvature identities of a metric connection with
/// skew torsion against its Levi-Civita base.
template <class S>
IdentityReport verify_connection_identities(const LieAlgebraData<S>& data, const ConnectionData<S>& conn,
                                            double tol = 1e-10) {
  const int d = data.dim_m();
  VecX<S> ginv = inverse_metric_diagonal(data);
  ConnectionData<S> lc = koszul_levi_civita(data);
  CurvatureData<S> rg = curvature(lc, data);
  CurvatureData<S> rn = curvature(conn, data);
  IdentityReport rep;
  auto check = [&](const S& v, bool& flag) {
    double r = std::abs(to_double(v));
    rep.max_residual = std::max(rep.max_residual, r);
    bool ok = scalar_traits<S>::is_zero(v, tol);
    flag = flag && ok;
  };

  const TorsionTensor<S>& t = conn.torsion;
  Form<S> t_form = torsion_to_form(t);
  Form<S> dt = invariant_exterior_derivative(t_form, data);
  Form<S> sigma = sigma_tensor_g(t, ginv);
  Form<S> delta_t = torsion_codifferential(t, conn, data);
  Form<S> delta_t_g = torsion_codifferential(t, lc, data);

  // skew-adjointness of R(U,V)
  for (int i = 0; i < d && rep.curvature_skew_adjoint; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) check(rn.rr(i, j, k, l) + rn.rr(i, j, l, k), rep.curvature_skew_adjoint);

  // scal relation
  S norm_t = form_norm_squared_g(t_form, ginv);
  check(rn.scal - (rg.scal - S(3) * norm_t / S(2)), rep.scal_relation);

  // Ric antisymmetric part = -delta T; delta may be taken with either
  // connection (they agree)
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      S lhs = rn.ricci(x, y) - rn.ricci(y, x);
      S rhs = x == y ? S(0)
                     : (x < y ? S(-1) * delta_t[(1u << x) | (1u << y)] : delta_t[(1u << y) | (1u << x)]);
      check(lhs - rhs, rep.ricci_antisymmetry);
    }
  for (std::uint32_t m = 0; m < (1u << d); ++m)
    if (std::popcount(m) == 2) check(delta_t[m] - delta_t_g[m], rep.ricci_antisymmetry);

  // nabla T and its vanishing
  std::vector<TorsionTensor<S>> nt;
  bool nabla_t_zero = true;
  for (int a = 0; a < d; ++a) {
    nt.push_back(covariant_derivative_torsion(conn, a, t));
    if (!nt.back().is_zero(tol)) nabla_t_zero = false;
  }
  rep.nabla_t_zero = nabla_t_zero;

  // first Bianchi: cyclic R(X,Y,Z,V) = dT(X,Y,Z,V) - sigma(X,Y,Z,V) + (nabla_V T)(X,Y,Z)
  for (int x = 0; x < d && rep.first_bianchi; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int v = 0; v < d; ++v) {
          S cyc = rn.rr(x, y, z, v) + rn.rr(y, z, x, v) + rn.rr(z, x, y, v);
          std::vector<int> a4{x + 1, y + 1, z + 1, v + 1};
          S rhs = (x != y && x != z && x != v && y != z && y != v && z != v)
                      ? form_eval(dt, a4) - form_eval(sigma, a4)
                      : S(0);
          rhs += nt[v](x, y, z);
          check(cyc - rhs, rep.first_bianchi);
        }

  // full Riemann relation:
  // R^g = R^n - 1/2 (n_X T)(Y,Z,V) + 1/2 (n_Y T)(X,Z,V) - 1/4 g(T(X,Y),T(Z,V)) - 1/4 sigma(X,Y,Z,V)
  auto pair_inner = [&](int a, int b, int cc, int e) {
    S acc(0);
    for (int k = 0; k < d; ++k) acc += ginv(k) * t(a, b, k) * t(cc, e, k);
    return acc;
  };
  for (int x = 0; x < d && rep.riemann_relation; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int v = 0; v < d; ++v) {
          S sig = (x != y && x != z && x != v && y != z && y != v && z != v)
                      ? form_eval(sigma, std::vector<int>{x + 1, y + 1, z + 1, v + 1})
                      : S(0);
          S rhs = rn.rr(x, y, z, v) - nt[x](y, z, v) / S(2) + nt[y](x, z, v) / S(2) -
                  pair_inner(x, y, z, v) / S(4) - sig / S(4);
          check(rg.rr(x, y, z, v) - rhs, rep.riemann_relation);
        }

  // dT = 2 sigma_T whenever nabla T = 0
  if (nabla_t_zero) {
    for (std::uint32_t m = 0; m < (1u << d); ++m)
      if (std::popcount(m) == 4) check(dt[m] - S(2) * sigma[m], rep.dT_is_2sigma);
  }
  return rep;
}

template <class S>
struct ReductiveFamily {
  ConnectionData<S> connection;
  Form<S> torsion_form;       // T^t as a 3-form (values on frame tuples)
  Form<S> d_torsion;          // dT^t
  std::vector<TorsionTensor<S>> nabla_torsion;  // per direction
  // Jacobi parts as (4,0) values <Jac(X,Y,Z), V>_g
  std::vector<S> jac_m;       // flat d^4
  std::vector<S> jac_h;       // flat d^4
};

/// The one-parameter family Lambda^t(X)Y = (1-t)/2 [X,Y]_m with torsion
/// T^t(X,Y) = -t [X,Y]_m on a naturally reductive space.
template <class S>
ReductiveFamily<S> reductive_family(const LieAlgebraData<S>& data, const S& t, double tol = 1e-12) {
  if (!data.naturally_reductive(tol)) throw std::invalid_argument("reductive_family: data not naturally reductive");
  const int d = data.dim_m();
  std::vector<MatX<S>> lambda(d, MatX<S>::Zero(d, d));
  const S coef = (S(1) - t) / S(2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lambda[i].col(j) = coef * data.bracket_m(i, j);
  ReductiveFamily<S> fam;
  fam.connection = make_connection(std::move(lambda), data, tol);
  fam.torsion_form = torsion_to_form(fam.connection.torsion);
  fam.d_torsion = invariant_exterior_derivative(fam.torsion_form, data);
  for (int a = 0; a < d; ++a)
    fam.nabla_torsion.push_back(covariant_derivative_torsion(fam.connection, a, fam.connection.torsion));

  fam.jac_m.assign(static_cast<std::size_t>(d) * d * d * d, S(0));
  fam.jac_h.assign(static_cast<std::size_t>(d) * d * d * d, S(0));
  auto basis_m = [&](int a) {
    VecX<S> v = VecX<S>::Zero(data.n);
    v(data.m[a]) = S(1);
    return v;
  };
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        // m-part Jacobi: [X,[Y,Z]_m]_m + [Y,[Z,X]_m]_m + [Z,[X,Y]_m]_m
        VecX<S> jm = VecX<S>::Zero(d);
        VecX<S> jh = VecX<S>::Zero(d);
        struct Cyc { int a, b, c; };
        for (const auto& p : {Cyc{x, y, z}, Cyc{y, z, x}, Cyc{z, x, y}}) {
          VecX<S> inner_m = data.full_from_m(data.bracket_m(p.b, p.c));
          VecX<S> outer = data.bracket(basis_m(p.a), inner_m);
          jm += data.m_part(outer);
          // h-part: [A, [B,C]_h]
          VecX<S> inner_h = VecX<S>::Zero(data.n);
          VecX<S> bh = data.bracket_h(p.b, p.c);
          for (int q = 0; q < data.dim_h(); ++q) inner_h(data.h[q]) = bh(q);
          VecX<S> outer_h = data.bracket(basis_m(p.a), inner_h);
          jh += data.m_part(outer_h);
        }
        VecX<S> jm_low = data.metric_m * jm;
        VecX<S> jh_low = data.metric_m * jh;
        for (int v = 0; v < d; ++v) {
          fam.jac_m[((static_cast<std::size_t>(x) * d + y) * d + z) * d + v] = jm_low(v);
          fam.jac_h[((static_cast<std::size_t>(x) * d + y) * d + z) * d + v] = jh_low(v);
        }
      }
  return fam;
}

template <class S>
struct KostantScalar {
  S value;            // (1/8)[ sum Q_h([ei,ej],[ei,ej]) + 1/3 sum Q_m([ei,ej],[ei,ej]) ]
  S via_curvature;    // (1/8)[ scal^{1/3} + (1/9) sum Q_m(...) ]
  S term_h, term_m;
};

/// The scalar entering the Parthasarathy-type formula for the cubic Dirac
/// operator at parameter 1/3; both printed routes are evaluated.
template <class S>
KostantScalar<S> kostant_scalar(const LieAlgebraData<S>& data, double tol = 1e-12) {
  if (data.dim_h() > 0 && !data.has_q_h) throw std::invalid_argument("kostant_scalar: Q_h required");
  const int d = data.dim_m();
  VecX<S> ginv = inverse_metric_diagonal(data, tol);
  S term_h(0), term_m(0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      S w = ginv(i) * ginv(j);
      VecX<S> bm = data.bracket_m(i, j);
      term_m += w * data.inner_m(bm, bm);
      if (data.dim_h() > 0) {
        VecX<S> bh = data.bracket_h(i, j);
        term_h += w * bh.dot(data.q_h * bh);
      }
    }
  KostantScalar<S> out;
  out.term_h = term_h;
  out.term_m = term_m;
  out.value = (term_h + term_m / S(3)) / S(8);
  auto fam = reductive_family(data, S(1) / S(3), tol);
  S scal13 = curvature(fam.connection, data, tol).scal;
  out.via_curvature = (scal13 + term_m / S(9)) / S(8);
  return out;
}

/// Degree-3 Clifford element (3/2) sum_{i<j<k} <[e_i,e_j]_m, e_k> e_i e_j e_k.
/// Requires an orthonormal frame.
template <class S>
Form<S> cubic_element(const LieAlgebraData<S>& data, double tol = 1e-12) {
  if (!data.metric_is_identity(tol)) throw std::invalid_argument("cubic_element: orthonormal frame required");
  const int d = data.dim_m();
  Form<S> h(d);
  const S c = S(3) / S(2);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      VecX<S> b = data.bracket_m(i, j);
      for (int k = j + 1; k < d; ++k)
        if (!scalar_traits<S>::is_zero(b(k), tol)) h[(1u << i) | (1u << j) | (1u << k)] += c * b(k);
    }
  return h;
}

/// Constant spinors annihilated by the lifted connection in every frame
/// direction: 1/2 gamma(omega^nabla(e_i)) psi = 0 with omega the connection
/// 2-form. Orthonormal frames only.
template <class CS, class S>
std::vector<VecX<CS>> parallel_spinors(const GammaRep<CS>& rep, const ConnectionData<S>& conn,
                                       const LieAlgebraData<S>& data, double tol = 1e-12) {
  if (!data.metric_is_identity(tol)) throw std::invalid_argument("parallel_spinors: orthonormal frame required");
  const int d = data.dim_m();
  if (rep.n != d) throw std::invalid_argument("parallel_spinors: representation dimension mismatch");
  std::vector<MatX<CS>> ops;
  for (int i = 0; i < d; ++i) {
    Form<S> omega = two_form_of_matrix(conn.lambda[i]);
    ops.push_back(spin_matrix(rep, omega));
  }
  MatX<CS> kern = joint_kernel<CS>(ops, tol);
  std::vector<VecX<CS>> out;
  for (int c = 0; c < kern.cols(); ++c) out.push_back(kern.col(c));
  return out;
}

template <class S>
struct StringIdentityReport {
  bool parallel_ok = false;
  bool eigen_ok = false;
  S mu;
  S norm_t, scal_n, scal_g;
  double residual_norm_identity = 0;
  double residual_scal_identity = 0;
  double residual_dt_action = 0;
};

/// Checks, for a nabla-parallel spinor with T psi = mu psi, the algebraic
/// identities ||T||^2 = mu^2 - scal^n/2, scal^g = 3/2 mu^2 + scal^n/4 and
/// dT psi = -(scal^n/2) psi.
template <class CS, class S>
StringIdentityReport<S> string_identity_check(const GammaRep<CS>& rep, const LieAlgebraData<S>& data,
                                              const ConnectionData<S>& conn, const VecX<CS>& psi,
                                              double tol = 1e-9) {
  StringIdentityReport<S> rep_out;
  const int d = data.dim_m();
  // verify parallelism
  double max_par = 0;
  for (int i = 0; i < d; ++i) {
    Form<S> omega = two_form_of_matrix(conn.lambda[i]);
    VecX<CS> v = spin_matrix(rep, omega) * psi;
    for (int r = 0; r < v.size(); ++r) max_par = std::max(max_par, scalar_traits<CS>::pivot_size(v(r)));
  }
  rep_out.parallel_ok = max_par <= tol;

  Form<S> t_form = torsion_to_form(conn.torsion);
  MatX<CS> t_op = form_action_matrix(rep, t_form);
  VecX<CS> t_psi = t_op * psi;
  // mu from the Rayleigh quotient (exact when psi is an eigenvector)
  CS num(0), den(0);
  for (int r = 0; r < psi.size(); ++r) {
    num += conj(psi(r)) * t_psi(r);
    den += conj(psi(r)) * psi(r);
  }
  CS mu_c = num / den;
  double eig_res = 0;
  for (int r = 0; r < psi.size(); ++r)
    eig_res = std::max(eig_res, scalar_traits<CS>::pivot_size(CS(t_psi(r) - mu_c * psi(r))));
  rep_out.eigen_ok = eig_res <= tol;
  rep_out.mu = S(real(mu_c));

  CurvatureData<S> rn = curvature(conn, data);
  CurvatureData<S> rg = curvature(koszul_levi_civita(data), data);
  rep_out.scal_n = rn.scal;
  rep_out.scal_g = rg.scal;
  rep_out.norm_t = t_form.norm_squared();

  S r1 = rep_out.norm_t - (rep_out.mu * rep_out.mu - rn.scal / S(2));
  S r2 = rg.scal - (S(3) * rep_out.mu * rep_out.mu / S(2) + rn.scal / S(4));
  rep_out.residual_norm_identity = std::abs(to_double(r1));
  rep_out.residual_scal_identity = std::abs(to_double(r2));

  // dT psi + (scal^n / 2) psi = 0
  Form<S> dt = invariant_exterior_derivative(t_form, data);
  VecX<CS> lhs = form_action_matrix(rep, dt) * psi;
  double half_scal = to_double(rn.scal) / 2.0;
  double r3 = 0;
  for (int r = 0; r < psi.size(); ++r) {
    std::complex<double> l{to_double(real(lhs(r))), to_double(imag(lhs(r)))};
    std::complex<double> p{to_double(real(psi(r))), to_double(imag(psi(r)))};
    r3 = std::max(r3, std::abs(l + half_scal * p));
  }
  rep_out.residual_dt_action = r3;
  return rep_out;
}

}  // namespace torsionforge

#endif
