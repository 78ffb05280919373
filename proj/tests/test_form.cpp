#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "torsionforge/form.hpp"
#include "torsionforge/io.hpp"
#include "torsionforge/torsion.hpp"

using namespace torsionforge;

TEST_CASE("clifford product sign convention") {
  auto e1 = FormQ::basis_vector(3, 1);
  CHECK(gp(e1, e1) == FormQ::scalar(3, Rational(-1)));

  auto e123 = FormQ::blade(3, {1, 2, 3});
  CHECK(gp(e123, e123) == FormQ::scalar(3, Rational(1)));

  // v . a = v ^ a - v -| a for vectors against random multivectors
  std::mt19937 rng(11u);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + trial % 4;
    auto v = tf_test::random_vector(rng, n);
    FormQ vf = FormQ::from_vector(v);
    FormQ a = tf_test::random_form(rng, n, 1 + trial % 3);
    CHECK(gp(vf, a) == wedge(vf, a) - contract(v, a));
  }
}

TEST_CASE("heisenberg torsion square: (2(e125+e345))^2 = 8 - 8 e1234") {
  auto t = FormQ::blade(5, {1, 2, 5}, Rational(2)) + FormQ::blade(5, {3, 4, 5}, Rational(2));
  auto sq = gp(t, t);
  FormQ want = FormQ::scalar(5, Rational(8)) + FormQ::blade(5, {1, 2, 3, 4}, Rational(-8));
  CHECK(sq == want);

  auto [scal, four] = clifford_square_parts(t);
  CHECK(scal == Rational(8));
  CHECK(four == FormQ::blade(5, {1, 2, 3, 4}, Rational(-8)));
  CHECK(t.norm_squared() == Rational(8));
}

TEST_CASE("interior product basics") {
  CHECK(interior(5, FormQ::blade(5, {1, 2, 5})) == FormQ::blade(5, {1, 2}));
  CHECK(interior(1, FormQ::blade(3, {2, 3})).is_zero());

  // antiderivation identity: v -| (v ^ a) + v ^ (v -| a) = |v|^2 a
  std::mt19937 rng(12u);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + trial % 5;
    auto v = tf_test::random_vector(rng, n);
    FormQ vf = FormQ::from_vector(v);
    FormQ a = tf_test::random_form(rng, n, trial % 4);
    Rational n2 = vf.norm_squared();
    CHECK(contract(v, wedge(vf, a)) + wedge(vf, contract(v, a)) == a * n2);
  }
}

TEST_CASE("hodge star") {
  CHECK(hodge_star(FormQ::blade(7, {1, 2, 3})) == FormQ::blade(7, {4, 5, 6, 7}));
  CHECK(hodge_star(FormQ::blade(6, {1, 2})) == FormQ::blade(6, {3, 4, 5, 6}));

  std::mt19937 rng(13u);
  for (int n = 2; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      FormQ a = tf_test::random_form(rng, n, k, false);
      int sign = ((k * (n - k)) % 2 == 0) ? 1 : -1;
      CHECK(hodge_star(hodge_star(a)) == a * Rational(sign));
    }
  // any 3-form in dim 7: ** = id
  FormQ a = tf_test::random_form(rng, 7, 3);
  CHECK(hodge_star(hodge_star(a)) == a);

  CHECK_THROWS_AS(hodge_star(FormQ::scalar(3, Rational(1)) + FormQ::basis_vector(3, 1)), std::invalid_argument);
}

TEST_CASE("wedge is graded anticommutative") {
  std::mt19937 rng(14u);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + trial % 4;
    int k = trial % 3 + 1, l = (trial / 3) % 3 + 1;
    FormQ a = tf_test::random_form(rng, n, k, false);
    FormQ b = tf_test::random_form(rng, n, l, false);
    int sign = ((k * l) % 2 == 0) ? 1 : -1;
    CHECK(wedge(a, b) == wedge(b, a) * Rational(sign));
  }
}

TEST_CASE("clifford square of 3-forms has pure scalar and 4-form parts") {
  std::mt19937 rng(15u);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + trial % 6;
    FormQ t = tf_test::random_form(rng, n, 3, false);
    FormQ sq = gp(t, t);
    CHECK(sq.grade_part(2).is_zero());
    CHECK(sq.grade_part(6).is_zero());
    CHECK(sq.scalar_part() == t.norm_squared());
    CHECK(sq.grade_part(4) == sigma_3form(t) * Rational(-2));
  }
  CHECK(clifford_square_parts(FormQ::blade(3, {1, 2, 3})).first == Rational(1));
  CHECK(clifford_square_parts(FormQ::blade(3, {1, 2, 3})).second.is_zero());
  CHECK(clifford_square_parts(FormQ(4)).first == Rational(0));
}

TEST_CASE("identity 3T = sum e_k (e_k -| T)") {
  std::mt19937 rng(16u);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + trial % 6;
    FormQ t = tf_test::random_form(rng, n, 3, false);
    FormQ acc(n);
    for (int k = 1; k <= n; ++k) acc += gp(FormQ::basis_vector(n, k), interior(k, t));
    CHECK(acc == t * Rational(3));
  }
}

TEST_CASE("dimension mismatch and bad blades are rejected") {
  CHECK_THROWS_AS(gp(FormQ(3), FormQ(4)), std::invalid_argument);
  CHECK_THROWS_AS(wedge(FormQ(3), FormQ(4)), std::invalid_argument);
  CHECK_THROWS_AS(FormQ::blade(3, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(FormQ::blade(3, {1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(FormQ(12), std::invalid_argument);
}

TEST_CASE("form json round trip") {
  std::mt19937 rng(17u);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + trial % 5;
    FormQ a = tf_test::random_form(rng, n, trial % 4, false);
    CHECK(form_from_json<Rational>(form_to_json(a)) == a);
  }
  auto j = form_to_json(FormQ::blade(5, {1, 2, 5}, Rational(1, 3)));
  CHECK(j.at("dim") == 5);
  CHECK(j.at("terms").at(0).at("c") == "1/3");
}

TEST_CASE("form expression parser") {
  CHECK(parse_form_expr<Rational>("e125", 5) == FormQ::blade(5, {1, 2, 5}));
  CHECK(parse_form_expr<Rational>("2e125+2e345", 5) ==
        FormQ::blade(5, {1, 2, 5}, Rational(2)) + FormQ::blade(5, {3, 4, 5}, Rational(2)));
  CHECK(parse_form_expr<Rational>("e21", 2) == FormQ::blade(2, {1, 2}, Rational(-1)));
  CHECK(parse_form_expr<Rational>("1/2e12-e34", 4) ==
        FormQ::blade(4, {1, 2}, Rational(1, 2)) - FormQ::blade(4, {3, 4}));
  CHECK(parse_form_expr<Rational>("e(1,10)", 10) == FormQ::blade(10, {1, 10}));
  CHECK_THROWS_AS(parse_form_expr<Rational>("e", 3), std::invalid_argument);
}
