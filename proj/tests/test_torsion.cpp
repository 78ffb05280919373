#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "torsionforge/embeddings.hpp"
#include "torsionforge/io.hpp"
#include "torsionforge/torsion.hpp"

using namespace torsionforge;

namespace {

template <class Rng>
TorsionTensor<Rational> random_torsion(Rng& rng, int n) {
  std::uniform_int_distribution<int> coef(-3, 3);
  TorsionTensor<Rational> t(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) t.set(i, j, k, Rational(coef(rng)));
  return t;
}

TorsionTensor<Rational> rotate(const TorsionTensor<Rational>& t, const MatQ& r) {
  const int n = t.dim();
  TorsionTensor<Rational> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Rational acc(0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) acc += r(a, i) * r(b, j) * r(c, k) * t(a, b, c);
        out.set(i, j, k, acc);
      }
  return out;
}

}  // namespace

TEST_CASE("a_to_t and t_to_a are mutually inverse bijections") {
  std::mt19937 rng(31u);
  for (int n = 3; n <= 6; ++n) {
    auto t = random_torsion(rng, n);
    auto a = t_to_a(t);
    CHECK(a.antisymmetry_ok());
    CHECK((a_to_t(a) - t).is_zero());
  }
  // A = 0 -> T = 0
  CHECK(a_to_t(DifferenceTensor<Rational>(4)).is_zero());
  // totally skew torsion: 2A = T
  std::uniform_int_distribution<int> coef(-3, 3);
  FormQ t3 = tf_test::random_form(rng, 5, 3);
  auto t = TorsionTensor<Rational>::from_3form(t3);
  auto a = t_to_a(t);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) CHECK(a(i, j, k) * Rational(2) == t(i, j, k));
}

TEST_CASE("vectorial torsion formulas for V = e1 in dimension 3") {
  VecQ v = VecQ::Zero(3);
  v(0) = Rational(1);
  auto t = vectorial_torsion(v);
  // T(X,Y,Z) = g(V,X)g(Y,Z) - g(V,Y)g(X,Z)
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Rational want = Rational((i == 0 && j == k) ? 1 : 0) - Rational((j == 0 && i == k) ? 1 : 0);
        CHECK(t(i, j, k) == want);
      }
  // difference tensor: A(X,Y) = g(X,Y)V - g(V,Y)X
  auto a = t_to_a(t);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Rational want = Rational((i == j && k == 0) ? 1 : 0) - Rational((j == 0 && i == k) ? 1 : 0);
        CHECK(a(i, j, k) == want);
      }
}

TEST_CASE("equivariance under an orthogonal change of frame") {
  // rational rotation by the (3,4,5) triangle in the (1,2)-plane
  MatQ r = MatQ::Identity(4, 4);
  r(0, 0) = Rational(3, 5);
  r(0, 1) = Rational(-4, 5);
  r(1, 0) = Rational(4, 5);
  r(1, 1) = Rational(3, 5);
  std::mt19937 rng(32u);
  auto t = random_torsion(rng, 4);
  auto a = t_to_a(t);
  auto a_rot = t_to_a(rotate(t, r));
  // rotate A the same way and compare
  const int n = 4;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Rational acc(0);
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) acc += r(x, i) * r(y, j) * r(z, k) * a(x, y, z);
        CHECK(a_rot(i, j, k) == acc);
      }
}

TEST_CASE("torsion decomposition: projections, orthogonality, dimensions") {
  std::mt19937 rng(33u);
  for (int n = 3; n <= 6; ++n) {
    auto t = random_torsion(rng, n);
    auto dec = decompose_torsion(t);
    CHECK((recompose(dec) - t).is_zero());
    auto tv = vectorial_torsion(dec.vectorial);
    auto ts = TorsionTensor<Rational>::from_3form(dec.skew);
    // pairwise orthogonality
    CHECK(tv.inner(ts) == Rational(0));
    CHECK(tv.inner(dec.prime) == Rational(0));
    CHECK(ts.inner(dec.prime) == Rational(0));
    // prime part: cyclic sum and 1-3 trace vanish
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational tr(0);
        for (int a = 0; a < n; ++a) tr += dec.prime(a, j, a);
        CHECK(tr == Rational(0));
        for (int k = 0; k < n; ++k)
          CHECK(dec.prime(i, j, k) + dec.prime(j, k, i) + dec.prime(k, i, j) == Rational(0));
      }
    // idempotence
    auto dec2 = decompose_torsion(tv);
    CHECK(dec2.vectorial == dec.vectorial);
    CHECK(dec2.skew.is_zero());
    CHECK(dec2.prime.is_zero());
    auto dec3 = decompose_torsion(ts);
    CHECK(dec3.skew == dec.skew);
    CHECK(dec3.prime.is_zero());
  }
  CHECK_THROWS_AS(decompose_torsion(TorsionTensor<Rational>(2)), std::invalid_argument);
}

TEST_CASE("component space dimensions n, n(n-1)(n-2)/6 and the remainder") {
  for (int n = 3; n <= 6; ++n) {
    const int dim_t = n * n * (n - 1) / 2;
    // elementary basis of the torsion space: i<j, any k
    std::vector<TorsionTensor<Rational>> basis;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          TorsionTensor<Rational> t(n);
          t.set(i, j, k, Rational(1));
          basis.push_back(t);
        }
    CHECK(static_cast<int>(basis.size()) == dim_t);
    SpanBuilder<Rational> vec_span(n);
    SpanBuilder<Rational> skew_span(1 << n);
    SpanBuilder<Rational> prime_span(n * n * n);
    for (const auto& t : basis) {
      auto dec = decompose_torsion(t);
      vec_span.add(dec.vectorial);
      skew_span.add(dec.skew.coeffs());
      VecQ flat(n * n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) flat((i * n + j) * n + k) = dec.prime(i, j, k);
      prime_span.add(flat);
    }
    CHECK(vec_span.dim() == n);
    CHECK(skew_span.dim() == n * (n - 1) * (n - 2) / 6);
    CHECK(prime_span.dim() == dim_t - n - n * (n - 1) * (n - 2) / 6);
  }
}

TEST_CASE("example of a pure Cartan-type difference tensor in dimension 3") {
  // A_X = g(X,e2) e2^e1 - g(X,e3) e3^e1
  DifferenceTensor<Rational> a(3);
  a.set(1, 1, 0, Rational(1));   // A(e2, e2, e1) = (e2^e1)(e2,e1) = 1
  a.set(2, 2, 0, Rational(-1));  // A(e3, e3, e1) = -(e3^e1)(e3,e1) = -1
  auto t = a_to_t(a);
  auto dec = decompose_torsion(t);
  for (int i = 0; i < 3; ++i) CHECK(dec.vectorial(i) == Rational(0));
  CHECK(dec.skew.is_zero());
  CHECK_FALSE(dec.prime.is_zero());
}

TEST_CASE("sigma_T: frame formula, frame-free formula, scaling, examples") {
  std::mt19937 rng(34u);
  CHECK(sigma_3form(tf_test::random_form(rng, 3, 3)).is_zero());
  CHECK(sigma_3form(FormQ::blade(5, {1, 2, 5}) + FormQ::blade(5, {3, 4, 5})) == FormQ::blade(5, {1, 2, 3, 4}));
  for (int trial = 0; trial < 100; ++trial) {
    int n = 4 + trial % 5;
    FormQ t = tf_test::random_form(rng, n, 3);
    FormQ s = sigma_3form(t);
    CHECK(s == sigma_framefree(t));
    CHECK(clifford_square_parts(t).second == s * Rational(-2));
    CHECK(sigma_3form(t * Rational(3)) == s * Rational(9));
  }
}

TEST_CASE("theta map for U(3) inside SO(6): injective with 20-dimensional image") {
  auto u3 = unitary_subalgebra<Rational>(3);
  auto m_basis = complement_in_so(u3, 6);
  CHECK(static_cast<int>(m_basis.size()) == 6);

  auto basis3 = three_form_basis<Rational>(6);
  MatQ image(static_cast<int>(basis3.size()), 6 * 6);
  for (std::size_t c = 0; c < basis3.size(); ++c) {
    MatQ th = theta_map(basis3[c], m_basis);
    for (int i = 0; i < 6; ++i)
      for (int a = 0; a < 6; ++a) image(static_cast<int>(c), i * 6 + a) = th(i, a);
  }
  CHECK(rank<Rational>(MatQ(image.transpose())) == 20);  // injective on Lambda^3, image dim 2+12+6

  // solving 2 Gamma = -Theta(T) recovers T uniquely
  std::mt19937 rng(35u);
  FormQ t = tf_test::random_form(rng, 6, 3);
  MatQ gamma = theta_map(t, m_basis) * Rational(-1, 2);
  auto sol = solve_characteristic(gamma, m_basis, 6);
  REQUIRE(sol.torsion.has_value());
  CHECK(sol.unique);
  CHECK(*sol.torsion == t);

  // Gamma = 0 -> T = 0
  auto zero = solve_characteristic(MatQ(MatQ::Zero(6, 6)), m_basis, 6);
  REQUIRE(zero.torsion.has_value());
  CHECK(zero.torsion->is_zero());

  // a Gamma with a W2 component is obstructed
  MatQ kern = kernel_basis<Rational>(MatQ(image));  // complement of the image inside R^6 (x) m
  CHECK(kern.cols() == 16);                         // the W2 module
  MatQ bad(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int a = 0; a < 6; ++a) bad(i, a) = kern(i * 6 + a, 0);
  auto obstructed = solve_characteristic(bad, m_basis, 6);
  CHECK_FALSE(obstructed.torsion.has_value());
  CHECK(obstructed.reason.find("no characteristic connection") != std::string::npos);
}

TEST_CASE("torsion tensor json round trip") {
  std::mt19937 rng(36u);
  auto t = random_torsion(rng, 5);
  auto j = torsion_to_json(t);
  auto back = torsion_from_json<Rational>(j);
  CHECK((back - t).is_zero());
}
