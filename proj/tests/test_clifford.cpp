#include <doctest.h>

#include <complex>
#include <random>

#include "test_util.hpp"
#include "torsionforge/clifford.hpp"
#include "torsionforge/embeddings.hpp"

using namespace torsionforge;

namespace {

bool anticommutation_ok(const GammaRep<RationalComplex>& rep) {
  const int N = rep.spinor_dim();
  for (int i = 0; i < rep.n; ++i)
    for (int j = i; j < rep.n; ++j) {
      MatQC ac = rep.gamma[i] * rep.gamma[j] + rep.gamma[j] * rep.gamma[i];
      MatQC want = i == j ? MatQC(MatQC::Identity(N, N) * RationalComplex(-2)) : MatQC(MatQC::Zero(N, N));
      if (ac != want) return false;
    }
  return true;
}

int exact_rank_shift(const MatQC& a, const RationalComplex& lambda) {
  MatQC shifted = a;
  for (int i = 0; i < a.rows(); ++i) shifted(i, i) -= lambda;
  return rank<RationalComplex>(shifted);
}

}  // namespace

TEST_CASE("gamma representations satisfy the anticommutation relations exactly") {
  for (int n = 1; n <= 10; ++n) {
    auto rep = build_gamma_rep<RationalComplex>(n);
    CHECK(rep.spinor_dim() == (1 << (n / 2)));
    CHECK(anticommutation_ok(rep));
  }
  CHECK_THROWS_AS(build_gamma_rep<RationalComplex>(0), std::invalid_argument);
  CHECK_THROWS_AS(build_gamma_rep<RationalComplex>(11), std::invalid_argument);
}

TEST_CASE("construction is deterministic") {
  auto a = build_gamma_rep<std::complex<double>>(7);
  auto b = build_gamma_rep<std::complex<double>>(7);
  for (int i = 0; i < 7; ++i) CHECK(a.gamma[i] == b.gamma[i]);
}

TEST_CASE("volume element convention in dimension 5") {
  auto rep = build_gamma_rep<RationalComplex>(5);
  MatQC vol = blade_matrix(rep, 0b11111);
  CHECK(vol * vol == MatQC(MatQC::Identity(4, 4) * RationalComplex(-1)));
}

TEST_CASE("generators are skew-Hermitian") {
  auto rep = build_gamma_rep<std::complex<double>>(6);
  for (const auto& g : rep.gamma) CHECK((g.adjoint() + g).norm() == 0.0);
}

TEST_CASE("scalar acts as identity; linearity") {
  auto rep = build_gamma_rep<RationalComplex>(4);
  CHECK(form_action_matrix(rep, FormQ::scalar(4, Rational(1))) == MatQC(MatQC::Identity(4, 4)));
  std::mt19937 rng(21u);
  FormQ a = tf_test::random_form(rng, 4, 2), b = tf_test::random_form(rng, 4, 3);
  CHECK(form_action_matrix(rep, a + b) == MatQC(form_action_matrix(rep, a) + form_action_matrix(rep, b)));
}

TEST_CASE("spin lift is bracket compatible") {
  auto rep = build_gamma_rep<RationalComplex>(5);
  std::mt19937 rng(22u);
  for (int trial = 0; trial < 10; ++trial) {
    FormQ a = tf_test::random_form(rng, 5, 2), b = tf_test::random_form(rng, 5, 2);
    // so bracket on 2-forms is half the Clifford commutator
    FormQ so_bracket = commutator(a, b) * Rational(1, 2);
    MatQ ma = so_matrix(a), mb = so_matrix(b);
    CHECK(so_matrix(so_bracket) == MatQ(ma * mb - mb * ma));
    MatQC sa = spin_matrix(rep, a), sb = spin_matrix(rep, b);
    CHECK(spin_matrix(rep, so_bracket) == MatQC(sa * sb - sb * sa));
  }
}

TEST_CASE("torsion operator 2(e12+e34)^e5 has eigenvalues (-4, 0, 0, 4) on Delta_5") {
  auto rep = build_gamma_rep<RationalComplex>(5);
  FormQ t = FormQ::blade(5, {1, 2, 5}, Rational(2)) + FormQ::blade(5, {3, 4, 5}, Rational(2));
  MatQC op = form_action_matrix(rep, t);
  CHECK(exact_rank_shift(op, RationalComplex(Rational(4))) == 3);
  CHECK(exact_rank_shift(op, RationalComplex(Rational(-4))) == 3);
  CHECK(exact_rank_shift(op, RationalComplex(Rational(0))) == 2);
}

TEST_CASE("Kaehler form action on Delta_6: eigenvalues i(3-2r), multiplicity binom(3,r)") {
  auto rep = build_gamma_rep<RationalComplex>(6);
  FormQ omega = standard_kaehler_form<Rational>(6);
  MatQC op = form_action_matrix(rep, omega);
  int binom[4] = {1, 3, 3, 1};
  for (int r = 0; r <= 3; ++r) {
    RationalComplex ev(Rational(0), Rational(3 - 2 * r));
    CHECK(8 - exact_rank_shift(op, ev) == binom[r]);
  }
}

TEST_CASE("spinor identity 2 sigma_T = sum (e_k -| T)^2 + 3 ||T||^2") {
  std::mt19937 rng(23u);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 4 + trial % 4;
    auto rep = build_gamma_rep<RationalComplex>(n);
    FormQ t = tf_test::random_form(rng, n, 3);
    const int N = rep.spinor_dim();
    MatQC lhs = form_action_matrix(rep, sigma_3form(t)) * RationalComplex(Rational(2));
    MatQC rhs = MatQC::Zero(N, N);
    for (int k = 1; k <= n; ++k) {
      MatQC c = form_action_matrix(rep, interior(k, t));
      rhs += c * c;
    }
    rhs += MatQC::Identity(N, N) * RationalComplex(t.norm_squared() * Rational(3));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("octonion model: real representations of Cl(7) and Cl(8)") {
  auto r7 = build_real_clifford7();
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) {
      MatQ ac = r7.gamma[i] * r7.gamma[j] + r7.gamma[j] * r7.gamma[i];
      MatQ want = i == j ? MatQ(MatQ::Identity(8, 8) * Rational(-2)) : MatQ(MatQ::Zero(8, 8));
      CHECK(ac == want);
    }
  auto r8 = build_real_clifford8();
  for (int i = 0; i < 8; ++i)
    for (int j = i; j < 8; ++j) {
      MatQ ac = r8.gamma[i] * r8.gamma[j] + r8.gamma[j] * r8.gamma[i];
      MatQ want = i == j ? MatQ(MatQ::Identity(16, 16) * Rational(-2)) : MatQ(MatQ::Zero(16, 16));
      CHECK(ac == want);
    }
  // volume splits the real spinors into 8 + 8
  MatQ vol = real_volume8(r8);
  CHECK(vol * vol == MatQ(MatQ::Identity(16, 16)));
  CHECK(16 - rank<Rational>(MatQ(vol - MatQ::Identity(16, 16))) == 8);
}

TEST_CASE("form action rejects dimension mismatch") {
  auto rep = build_gamma_rep<RationalComplex>(4);
  CHECK_THROWS_AS(form_action_matrix(rep, FormQ(5)), std::invalid_argument);
}
