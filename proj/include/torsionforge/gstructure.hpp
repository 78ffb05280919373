#ifndef TORSIONFORGE_GSTRUCTURE_HPP
#define TORSIONFORGE_GSTRUCTURE_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionforge/connection.hpp"
#include "torsionforge/embeddings.hpp"
#include "torsionforge/form.hpp"
#include "torsionforge/liealg.hpp"
#include "torsionforge/torsion.hpp"

namespace torsionforge {

/// Pullback of a k-form along a linear map: (A*w)(X...) = w(AX,...).
template <class S>
Form<S> pullback_form(const MatX<S>& a, const Form<S>& w) {
  const int n = w.dim();
  int k = w.homogeneous_grade();
  if (k < 0) {
    if (w.is_zero()) return Form<S>(n);
    throw std::invalid_argument("pullback_form: homogeneous input required");
  }
  if (k == 0) return w;
  Form<S> out(n);
  auto targets = w.support();
  for (std::uint32_t mi = 0; mi < (1u << n); ++mi) {
    if (std::popcount(mi) != k) continue;
    std::vector<int> cols;
    for (int b = 0; b < n; ++b)
      if (mi & (1u << b)) cols.push_back(b);
    S val(0);
    for (std::uint32_t mj : targets) {
      std::vector<int> rows;
      for (int b = 0; b < n; ++b)
        if (mj & (1u << b)) rows.push_back(b);
      // det of the submatrix a[rows, cols]
      MatX<S> sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = a(rows[r], cols[c]);
      // small determinant by elimination-free expansion for k <= 4
      S det(0);
      if (k == 1) det = sub(0, 0);
      else if (k == 2) det = sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
      else if (k == 3)
        det = sub(0, 0) * (sub(1, 1) * sub(2, 2) - sub(1, 2) * sub(2, 1)) -
              sub(0, 1) * (sub(1, 0) * sub(2, 2) - sub(1, 2) * sub(2, 0)) +
              sub(0, 2) * (sub(1, 0) * sub(2, 1) - sub(1, 1) * sub(2, 0));
      else {
        // generic Laplace expansion along the first row
        std::function<S(std::vector<int>, std::vector<int>)> lap = [&](std::vector<int> rs, std::vector<int> cs) -> S {
          if (rs.size() == 1) return a(rs[0], cs[0]);
          S acc(0);
          for (std::size_t c = 0; c < cs.size(); ++c) {
            std::vector<int> rs2(rs.begin() + 1, rs.end());
            std::vector<int> cs2;
            for (std::size_t cc = 0; cc < cs.size(); ++cc)
              if (cc != c) cs2.push_back(cs[cc]);
            S term = a(rs[0], cs[c]) * lap(rs2, cs2);
            if (c & 1) acc -= term;
            else acc += term;
          }
          return acc;
        };
        det = lap(rows, cols);
      }
      val += w[mj] * det;
    }
    out[mi] = val;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

template <class S>
struct AlmostHermitian {
  MatX<S> j;

  void validate(double tol = 1e-10) const {
    const int n = static_cast<int>(j.rows());
    if (n % 2) throw std::invalid_argument("AlmostHermitian: even dimension required");
    MatX<S> j2 = j * j + MatX<S>::Identity(n, n);
    MatX<S> comp = j.transpose() * j - MatX<S>::Identity(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!scalar_traits<S>::is_zero(j2(a, b), tol)) throw std::invalid_argument("AlmostHermitian: J^2 != -Id");
        if (!scalar_traits<S>::is_zero(comp(a, b), tol))
          throw std::invalid_argument("AlmostHermitian: J not g-compatible");
      }
  }

  Form<S> kaehler_form() const { return two_form_of_matrix(j); }
};

template <class S>
struct AlmostContact {
  MatX<S> phi;
  VecX<S> xi;

  void validate(double tol = 1e-10) const {
    const int n = static_cast<int>(phi.rows());
    if (n % 2 == 0) throw std::invalid_argument("AlmostContact: odd dimension required");
    S eta_xi = xi.dot(xi);
    if (!scalar_traits<S>::is_zero(eta_xi - S(1), tol)) throw std::invalid_argument("AlmostContact: eta(xi) != 1");
    MatX<S> want = -MatX<S>::Identity(n, n) + xi * xi.transpose();
    MatX<S> p2 = phi * phi - want;
    MatX<S> comp = phi.transpose() * phi - (MatX<S>::Identity(n, n) - xi * xi.transpose());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!scalar_traits<S>::is_zero(p2(a, b), tol))
          throw std::invalid_argument("AlmostContact: phi^2 != -Id + eta (x) xi");
        if (!scalar_traits<S>::is_zero(comp(a, b), tol))
          throw std::invalid_argument("AlmostContact: metric compatibility fails");
      }
  }

  Form<S> fundamental_form() const { return two_form_of_matrix(phi); }
  Form<S> eta_form() const { return Form<S>::from_vector(xi); }
};

// ---------------------------------------------------------------------------
// Nijenhuis tensors (computed through the Levi-Civita connection, valid on
// any reductive homogeneous sample)
// ---------------------------------------------------------------------------

/// (nabla_i J) = [Lambda_i, J].
template <class S>
std::vector<MatX<S>> nabla_endomorphism(const ConnectionData<S>& conn, const MatX<S>& j) {
  std::vector<MatX<S>> out;
  out.reserve(conn.lambda.size());
  for (const auto& l : conn.lambda) out.push_back(l * j - j * l);
  return out;
}

/// N(X,Y) = (nabla_X J)JY - (nabla_Y J)JX + (nabla_JX J)Y - (nabla_JY J)X.
template <class S>
TorsionTensor<S> nijenhuis_hermitian(const AlmostHermitian<S>& desc, const LieAlgebraData<S>& data,
                                     double tol = 1e-10) {
  desc.validate(tol);
  const int d = data.dim_m();
  ConnectionData<S> lc = koszul_levi_civita(data);
  auto nj = nabla_endomorphism(lc, desc.j);
  TorsionTensor<S> n(d);
  for (int x = 0; x < d; ++x)
    for (int y = x + 1; y < d; ++y) {
      VecX<S> ex = VecX<S>::Zero(d), ey = VecX<S>::Zero(d);
      ex(x) = S(1);
      ey(y) = S(1);
      VecX<S> val = nj[x] * (desc.j * ey) - nj[y] * (desc.j * ex);
      VecX<S> jx = desc.j.col(x), jy = desc.j.col(y);
      for (int a = 0; a < d; ++a) {
        if (!scalar_traits<S>::is_zero(jx(a), tol)) val += nj[a] * ey * jx(a);
        if (!scalar_traits<S>::is_zero(jy(a), tol)) val -= nj[a] * ex * jy(a);
      }
      VecX<S> low = data.metric_m * val;
      for (int k = 0; k < d; ++k) n.set(x, y, k, low(k));
    }
  return n;
}

/// Contact Nijenhuis tensor via covariant derivatives:
/// N(X,Y) = (nabla_X phi)phiY - (nabla_Y phi)phiX + (nabla_phiX phi)Y
///          - (nabla_phiY phi)X + eta(X) nabla_Y xi - eta(Y) nabla_X xi.
template <class S>
TorsionTensor<S> nijenhuis_contact(const AlmostContact<S>& desc, const LieAlgebraData<S>& data,
                                   double tol = 1e-10) {
  desc.validate(tol);
  const int d = data.dim_m();
  ConnectionData<S> lc = koszul_levi_civita(data);
  auto np = nabla_endomorphism(lc, desc.phi);
  TorsionTensor<S> n(d);
  for (int x = 0; x < d; ++x)
    for (int y = x + 1; y < d; ++y) {
      VecX<S> ex = VecX<S>::Zero(d), ey = VecX<S>::Zero(d);
      ex(x) = S(1);
      ey(y) = S(1);
      VecX<S> val = np[x] * (desc.phi * ey) - np[y] * (desc.phi * ex);
      VecX<S> px = desc.phi.col(x), py = desc.phi.col(y);
      for (int a = 0; a < d; ++a) {
        if (!scalar_traits<S>::is_zero(px(a), tol)) val += np[a] * ey * px(a);
        if (!scalar_traits<S>::is_zero(py(a), tol)) val -= np[a] * ex * py(a);
      }
      val += desc.xi(x) * (lc.lambda[y] * desc.xi) - desc.xi(y) * (lc.lambda[x] * desc.xi);
      VecX<S> low = data.metric_m * val;
      for (int k = 0; k < d; ++k) n.set(x, y, k, low(k));
    }
  return n;
}

// ---------------------------------------------------------------------------
// Characteristic torsions
// ---------------------------------------------------------------------------

template <class S>
struct CharTorsionResult {
  std::optional<Form<S>> torsion;
  std::string refusal;  // set when no characteristic connection exists
  bool parallel_checked = false;
};

/// Totally skew part test for a (2,1)-style tensor.
template <class S>
bool totally_skew(const TorsionTensor<S>& n, double tol = 1e-10) {
  const int d = n.dim();
  TorsionTensor<S> diff = n - TorsionTensor<S>::from_3form(n.skew_part_form());
  return diff.is_zero(tol);
}

/// Characteristic torsion of an almost Hermitian structure:
/// T = N + dOmega(J.,J.,J.), defined when N is totally skew.
template <class S>
CharTorsionResult<S> hermitian_char_torsion(const AlmostHermitian<S>& desc, const LieAlgebraData<S>& data,
                                            double tol = 1e-10) {
  CharTorsionResult<S> out;
  TorsionTensor<S> n = nijenhuis_hermitian(desc, data, tol);
  if (!totally_skew(n, tol)) {
    out.refusal = "Nijenhuis tensor not totally skew (W2 component): no characteristic connection";
    return out;
  }
  Form<S> n_form = n.skew_part_form();
  Form<S> omega = desc.kaehler_form();
  Form<S> domega = invariant_exterior_derivative(omega, data);
  Form<S> t = n_form + pullback_form(desc.j, domega);

  // the produced connection must make J parallel
  ConnectionData<S> conn = with_torsion(koszul_levi_civita(data), data, t, tol);
  for (const auto& nj : nabla_endomorphism(conn, desc.j))
    for (int a = 0; a < nj.rows(); ++a)
      for (int b = 0; b < nj.cols(); ++b)
        if (!scalar_traits<S>::is_zero(nj(a, b), tol))
          throw std::runtime_error("hermitian_char_torsion: produced connection does not preserve J");
  out.parallel_checked = true;
  out.torsion = t;
  return out;
}

/// Characteristic torsion of an almost contact metric structure:
/// T = eta ^ d eta + d^phi F + N - eta ^ (xi -| N), defined when N is
/// totally skew and xi is a Killing field.
template <class S>
CharTorsionResult<S> contact_char_torsion(const AlmostContact<S>& desc, const LieAlgebraData<S>& data,
                                          double tol = 1e-10) {
  CharTorsionResult<S> out;
  const int d = data.dim_m();
  ConnectionData<S> lc = koszul_levi_civita(data);
  // Killing test: <nabla_X xi, Y> + <nabla_Y xi, X> = 0
  MatX<S> k(d, d);
  for (int i = 0; i < d; ++i) k.col(i) = data.metric_m * (lc.lambda[i] * desc.xi);
  MatX<S> sym = k + k.transpose();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (!scalar_traits<S>::is_zero(sym(a, b), tol)) {
        out.refusal = "xi is not a Killing field: no characteristic connection";
        return out;
      }
  TorsionTensor<S> n = nijenhuis_contact(desc, data, tol);
  if (!totally_skew(n, tol)) {
    out.refusal = "Nijenhuis tensor not totally skew: no characteristic connection";
    return out;
  }
  Form<S> n_form = n.skew_part_form();
  Form<S> eta = desc.eta_form();
  Form<S> deta = invariant_exterior_derivative(eta, data);
  Form<S> f = desc.fundamental_form();
  Form<S> df = invariant_exterior_derivative(f, data);
  Form<S> dphi_f = -pullback_form(desc.phi, df);
  Form<S> t = wedge(eta, deta) + dphi_f + n_form - wedge(eta, contract(desc.xi, n_form));

  ConnectionData<S> conn = with_torsion(lc, data, t, tol);
  for (const auto& np : nabla_endomorphism(conn, desc.phi))
    for (int a = 0; a < np.rows(); ++a)
      for (int b = 0; b < np.cols(); ++b)
        if (!scalar_traits<S>::is_zero(np(a, b), tol))
          throw std::runtime_error("contact_char_torsion: produced connection does not preserve phi");
  for (int i = 0; i < d; ++i) {
    VecX<S> v = conn.lambda[i] * desc.xi;
    for (int a = 0; a < d; ++a)
      if (!scalar_traits<S>::is_zero(v(a), tol))
        throw std::runtime_error("contact_char_torsion: produced connection does not preserve xi");
  }
  out.parallel_checked = true;
  out.torsion = t;
  return out;
}

template <class S>
struct G2CharResult {
  std::optional<Form<S>> torsion;
  std::optional<Form<S>> lee_form;
  std::string refusal;
};

/// Characteristic torsion of a G2-structure from its differentials:
/// requires d*w = theta ^ *w for some 1-form theta, then
/// T = *dw - (1/6) <dw, *w> w - *(theta ^ w).
/// The two outer signs are pinned by the defining property (the shifted
/// connection preserves w; equivalently the solve of 2 Gamma = -Theta(T)
/// returns the same 3-form), checked exactly in the tests. For a nearly
/// parallel structure, dw = lambda *w gives T = -(lambda/6) w.
template <class S>
G2CharResult<S> g2_char_torsion(const Form<S>& w, const Form<S>& dw, const Form<S>& dsw, double tol = 1e-10) {
  if (w.dim() != 7) throw std::invalid_argument("g2_char_torsion: dimension 7 required");
  G2CharResult<S> out;
  Form<S> sw = hodge_star(w);
  // solve theta ^ *w = d*w over 1-forms
  MatX<S> sys(1 << 7, 7);
  for (int i = 0; i < 7; ++i) {
    Form<S> col = wedge(Form<S>::basis_vector(7, i + 1), sw);
    sys.col(i) = col.coeffs();
  }
  auto theta = solve_consistent<S>(sys, dsw.coeffs(), tol);
  if (!theta) {
    out.refusal = "d*w is not of the form theta ^ *w (X2 component): no characteristic connection";
    return out;
  }
  Form<S> theta_form = Form<S>::from_vector(*theta);
  S pairing = dw.inner(sw);
  Form<S> t = hodge_star(dw) - w * (pairing / S(6)) - hodge_star(wedge(theta_form, w));
  out.torsion = t;
  out.lee_form = theta_form;
  return out;
}

// ---------------------------------------------------------------------------
// Intrinsic torsion and class machinery
// ---------------------------------------------------------------------------

/// Intrinsic torsion of a G-structure on a left-invariant sample: the
/// m-projection of the Levi-Civita connection forms, in the coordinates of
/// the complement basis. Returns (Gamma, m_basis).
template <class S>
std::pair<MatX<S>, std::vector<Form<S>>> intrinsic_torsion(const LieAlgebraData<S>& data,
                                                           const std::vector<Form<S>>& subalgebra,
                                                           double tol = 1e-10) {
  const int d = data.dim_m();
  if (!data.metric_is_identity(tol)) throw std::invalid_argument("intrinsic_torsion: orthonormal frame required");
  auto m_basis = complement_in_so(subalgebra, d, tol);
  const int dm = static_cast<int>(m_basis.size());
  MatX<S> gram(dm, dm);
  for (int a = 0; a < dm; ++a)
    for (int b = 0; b < dm; ++b) gram(a, b) = m_basis[a].inner(m_basis[b]);
  ConnectionData<S> lc = koszul_levi_civita(data);
  MatX<S> gamma(d, dm);
  for (int i = 0; i < d; ++i) {
    Form<S> omega = two_form_of_matrix(lc.lambda[i]);
    VecX<S> rhs(dm);
    for (int a = 0; a < dm; ++a) rhs(a) = m_basis[a].inner(omega);
    auto coords = solve_consistent<S>(gram, rhs, tol);
    if (!coords) throw std::runtime_error("intrinsic_torsion: degenerate complement basis");
    gamma.row(i) = coords->transpose();
  }
  return {gamma, m_basis};
}

/// tau(T) = sum_i (e_i -| Omega) ^ (e_i -| T) on 3-forms; its square has
/// eigenvalues -9 and -1 on Lambda^3(R^6).
template <class S>
MatX<S> tau_matrix(const Form<S>& omega) {
  const int n = omega.dim();
  auto basis = blade_basis<S>(n, 3);
  const int nb = static_cast<int>(basis.size());
  MatX<S> out(nb, nb);
  for (int c = 0; c < nb; ++c) {
    Form<S> img(n);
    for (int i = 1; i <= n; ++i) img += wedge(interior(i, omega), interior(i, basis[c]));
    for (int r = 0; r < nb; ++r) out(r, c) = img.inner(basis[r]);
  }
  return out;
}

}  // namespace torsionforge

#endif
