#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "torsionforge/clifford.hpp"
#include "torsionforge/embeddings.hpp"
#include "torsionforge/stabilizer.hpp"
#include "torsionforge/tables.hpp"

using namespace torsionforge;

namespace {

std::vector<FormQ> contraction_generators(const FormQ& t) {
  std::vector<FormQ> gens;
  for (int i = 1; i <= t.dim(); ++i) {
    FormQ g = interior(i, t);
    if (!g.is_zero()) gens.push_back(g);
  }
  return gens;
}

std::vector<int> block_dims(const std::vector<IsotypicBlock>& blocks) {
  std::vector<int> dims;
  for (const auto& b : blocks) dims.push_back(b.dimension);
  std::sort(dims.begin(), dims.end());
  return dims;
}

}  // namespace

TEST_CASE("stabilizer of the G2 3-form in so(7) has dimension 14 and is bracket closed") {
  auto w3 = g2_three_form<Rational>();
  auto basis = form_stabilizer_subalgebra(w3);
  CHECK(static_cast<int>(basis.size()) == 14);
  CHECK(bracket_closed(basis));
  // each basis element annihilates the form
  for (const auto& a : basis) CHECK(so_act_on_form(a, w3).is_zero());
}

TEST_CASE("zero target returns the whole ambient algebra") {
  auto blades = blade_basis<Rational>(4, 2);
  std::vector<MatQ> ops;
  for (const auto& b : blades) ops.push_back(so_action_on_grade(b, 3));
  VecQ zero = VecQ::Zero(4);
  auto stab = stabilizer<Rational>(ops, zero);
  CHECK(stab.dimension == 6);
}

TEST_CASE("u(n) and su(n) defining equations reproduce dimensions n^2 and n^2 - 1") {
  for (int n = 2; n <= 4; ++n) {
    CHECK(unitary_equation_solution_space<Rational>(n, false).cols() == n * n);
    CHECK(unitary_equation_solution_space<Rational>(n, true).cols() == n * n - 1);
    CHECK(static_cast<int>(unitary_subalgebra<Rational>(n).size()) == n * n);
    CHECK(static_cast<int>(special_unitary_subalgebra<Rational>(n).size()) == n * n - 1);
    // explicit basis spans the equation solution space
    auto eq = unitary_equation_solution_space<Rational>(n, false);
    SpanBuilder<Rational> span(1 << (2 * n));
    auto blades = blade_basis<Rational>(2 * n, 2);
    for (int c = 0; c < eq.cols(); ++c) {
      FormQ f(2 * n);
      for (int a = 0; a < eq.rows(); ++a) f += blades[a] * eq(a, c);
      span.add(f.coeffs());
    }
    for (const auto& u : unitary_subalgebra<Rational>(n)) CHECK(span.contains(u.coeffs()));
    CHECK(bracket_closed(unitary_subalgebra<Rational>(n)));
    CHECK(bracket_closed(special_unitary_subalgebra<Rational>(n)));
  }
}

TEST_CASE("invariant spinor multiplicities: u(3) -> 0, su(3) -> 2 on Delta_6, g2 -> 1 on Delta_7") {
  auto rep6 = build_gamma_rep<RationalComplex>(6);
  auto mult_of = [&](const std::vector<FormQ>& sub) {
    std::vector<MatQC> ops;
    for (const auto& a : sub) ops.push_back(spin_matrix(rep6, a));
    return invariant_multiplicity<RationalComplex>(ops);
  };
  CHECK(mult_of(unitary_subalgebra<Rational>(3)) == 0);
  CHECK(mult_of(special_unitary_subalgebra<Rational>(3)) == 2);

  // g2 on the real 8-dimensional Cl(7) spinors: R + R^7
  auto r7 = build_real_clifford7();
  auto g2 = form_stabilizer_subalgebra(g2_three_form<Rational>());
  std::vector<MatQ> ops;
  for (const auto& a : g2) ops.push_back(spin_matrix(r7, a));
  CHECK(invariant_multiplicity<Rational>(ops) == 1);
}

TEST_CASE("Lie closures of contraction algebras") {
  auto dim_of = [&](const FormQ& t) { return static_cast<int>(lie_closure(contraction_generators(t)).size()); };

  // Cartan's example: T = -2 e123 in R^3 closes to so(3)
  FormQ cartan = FormQ::blade(3, {1, 2, 3}, Rational(-2));
  auto closure3 = lie_closure(contraction_generators(cartan));
  CHECK(static_cast<int>(closure3.size()) == 3);
  CHECK(static_cast<int>(derived_algebra(closure3).size()) == 3);

  CHECK(dim_of(FormQ::blade(5, {1, 2, 3, 4})) == 10);  // so(4,1)
  CHECK(dim_of(FormQ::blade(6, {1, 2, 3, 4, 5, 6})) == 21);  // spin(7)

  // e1234 + e3456: the generators plus their first brackets span 6 + 15 = 21
  // dimensions, but the iterated closure picks up the volume form through
  // mixed-grade brackets and stabilizes at Lambda^2 + Lambda^3 + R vol = 36.
  {
    FormQ t = FormQ::blade(6, {1, 2, 3, 4}) + FormQ::blade(6, {3, 4, 5, 6});
    auto gens = contraction_generators(t);
    SpanBuilder<Rational> two_step(1 << 6);
    for (const auto& g : gens) two_step.add(g.coeffs());
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) two_step.add(commutator(gens[i], gens[j]).coeffs());
    CHECK(two_step.dim() == 21);
    auto closure = lie_closure(gens);
    CHECK(static_cast<int>(closure.size()) == 36);
    SpanBuilder<Rational> g2(1 << 6), g3(1 << 6), g6(1 << 6);
    for (const auto& f : closure) {
      g2.add(f.grade_part(2).coeffs());
      g3.add(f.grade_part(3).coeffs());
      g6.add(f.grade_part(6).coeffs());
    }
    CHECK(g2.dim() == 15);
    CHECK(g3.dim() == 20);
    CHECK(g6.dim() == 1);
  }

  FormQ rank8(8);
  rank8[0b00000011] = Rational(1);
  rank8[0b00001100] = Rational(2);
  rank8[0b00110000] = Rational(3);
  rank8[0b11000000] = Rational(4);
  CHECK(dim_of(rank8) == 36);  // spin(9)
}

TEST_CASE("closure output is bracket closed") {
  std::mt19937 rng(41u);
  FormQ t = tf_test::random_form(rng, 5, 3);
  auto closure = lie_closure(contraction_generators(t));
  CHECK(bracket_closed(closure));
}

TEST_CASE("nonzero 3-forms admit no joint spinor annihilator") {
  std::mt19937 rng(42u);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 4 + trial % 5;
    auto rep = build_gamma_rep<RationalComplex>(n);
    FormQ t = tf_test::random_form(rng, n, 3);
    std::vector<MatQC> ops;
    for (int i = 1; i <= n; ++i) ops.push_back(form_action_matrix(rep, interior(i, t)));
    CHECK(invariant_multiplicity<RationalComplex>(ops) == 0);
  }
  // and T = 0 is the only exception
  auto rep = build_gamma_rep<RationalComplex>(4);
  std::vector<MatQC> ops;
  for (int i = 1; i <= 4; ++i) ops.push_back(form_action_matrix(rep, interior(i, FormQ(4))));
  CHECK(invariant_multiplicity<RationalComplex>(ops) == rep.spinor_dim());
}

TEST_CASE("no nondegenerate 2-form commutes with the closure of a nonzero 3-form") {
  std::mt19937 rng(43u);
  for (int k : {2, 3, 4}) {
    int n = 2 * k;
    FormQ t = tf_test::random_form(rng, n, 3);
    auto closure = lie_closure(contraction_generators(t));
    // solve [g, Omega] = 0 over 2-forms; brackets of 2-forms stay in grade 2
    auto blades = blade_basis<Rational>(n, 2);
    const int nb = static_cast<int>(blades.size());
    MatQ sys(static_cast<int>(closure.size()) * nb, nb);
    for (int c = 0; c < nb; ++c)
      for (std::size_t g = 0; g < closure.size(); ++g) {
        FormQ br = commutator(closure[g], blades[c]);
        for (int r = 0; r < nb; ++r) sys(static_cast<int>(g) * nb + r, c) = br.inner(blades[r]);
      }
    MatQ comm = kernel_basis<Rational>(std::move(sys));
    for (int c = 0; c < comm.cols(); ++c) {
      FormQ omega(n);
      for (int a = 0; a < nb; ++a) omega += blades[a] * comm(a, c);
      FormQ power = omega;
      for (int p = 1; p < k; ++p) power = wedge(power, omega);
      CHECK(power.is_zero());  // Omega^k = 0 for every commuting 2-form
    }
  }
}

TEST_CASE("spinor stabilizer table in dimension 8") {
  auto rows = spinor_stabilizer_table_dim8();
  REQUIRE(rows.size() == 6);
  auto find = [&](const std::string& g) {
    for (const auto& r : rows)
      if (r.group == g) return r;
    throw std::runtime_error("row missing");
  };
  CHECK(find("spin7").dim == 21);
  CHECK(find("spin7").invariants_plus == 0);
  CHECK(find("spin7").invariants_minus == 1);
  CHECK(find("su4").dim == 15);
  CHECK(find("su4").invariants_minus == 2);
  CHECK(find("sp2").dim == 10);
  CHECK(find("sp2").invariants_minus == 3);
  CHECK(find("g2").dim == 14);
  CHECK(find("g2").invariants_plus == 1);
  CHECK(find("g2").invariants_minus == 1);
  CHECK(find("su3").dim == 8);
  CHECK(find("su3").invariants_plus == 2);
  CHECK(find("su2").dim == 3);
  CHECK(find("su2").invariants_plus == 4);
}

TEST_CASE("dimension count for geometries defined by 3-forms") {
  auto counts = three_form_dimension_count();
  std::vector<int> want{8, 12, 15, 16, 14, 8};
  for (int n = 3; n <= 8; ++n) CHECK(counts.at(n) == want[n - 3]);
}

TEST_CASE("isotypic dimensions under the 5-dimensional so(3) irrep") {
  auto gens = so3_irrep5();  // three 5x5 antisymmetric generators (double)
  // carrier Lambda^3(R^5)
  std::vector<MatX<double>> def, rho;
  for (const auto& g : gens) {
    def.push_back(g);
    rho.push_back(derivation_action_on_grade<double>(g, 3));
  }
  auto cas = casimir_from_ops<double>(def, rho);
  auto blocks = casimir_spectrum<double>(cas);
  CHECK(block_dims(blocks) == std::vector<int>{3, 7});

  // carrier R^5 (x) m^7, m = complement of so(3) in so(5)
  Eigen::MatrixXd span(10, 3);
  auto flatten = [](const Eigen::MatrixXd& a) {
    Eigen::VectorXd v(10);
    int q = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) v(q++) = a(i, j);
    return v;
  };
  for (int g = 0; g < 3; ++g) span.col(g) = flatten(gens[g]);
  // orthonormal basis of the complement via the QR of [span | I]
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(10, 10) -
                         span * (span.transpose() * span).inverse() * span.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj, Eigen::ComputeThinU);
  Eigen::MatrixXd mbasis(10, 7);
  int col = 0;
  for (int i = 0; i < 10 && col < 7; ++i)
    if (svd.singularValues()(i) > 0.5) mbasis.col(col++) = svd.matrixU().col(i);
  REQUIRE(col == 7);
  auto unflatten = [](const Eigen::VectorXd& v) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
    int q = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        a(i, j) = v(q);
        a(j, i) = -v(q);
        ++q;
      }
    return a;
  };
  std::vector<MatX<double>> rho_tensor;
  for (const auto& g : gens) {
    Eigen::MatrixXd ad(7, 7);
    for (int b = 0; b < 7; ++b) {
      Eigen::MatrixXd w = unflatten(mbasis.col(b));
      Eigen::MatrixXd img = g * w - w * g;
      ad.col(b) = mbasis.transpose() * flatten(img);
    }
    rho_tensor.push_back(kron<double>(g, Eigen::MatrixXd::Identity(7, 7)) +
                         kron<double>(Eigen::MatrixXd::Identity(5, 5), ad));
  }
  auto cas2 = casimir_from_ops<double>(def, rho_tensor);
  auto blocks2 = casimir_spectrum<double>(cas2, 1e-6);
  CHECK(block_dims(blocks2) == std::vector<int>{3, 5, 7, 9, 11});
}

TEST_CASE("exact so(3) weight counting cross-checks the isotypic content") {
  MatQ l = so3_irrep5_weight_generator();
  // Lambda^2(R^5) = spin1 + spin3 (the so(3) + m^7 split of so(5))
  MatQ l2 = derivation_action_on_grade<Rational>(l, 2);
  auto content2 = so3_weight_content(l2, 4);
  CHECK(content2 == std::vector<std::pair<int, int>>{{1, 1}, {3, 1}});
  // Lambda^3(R^5) = spin1 + spin3: dims 3 + 7
  MatQ l3 = derivation_action_on_grade<Rational>(l, 3);
  auto content3 = so3_weight_content(l3, 4);
  CHECK(content3 == std::vector<std::pair<int, int>>{{1, 1}, {3, 1}});
  // R^5 (x) Lambda^2(R^5): subtracting R^5 (x) so(3) = spin1+spin2+spin3
  // leaves R^5 (x) m^7 = spin1+...+spin5
  MatQ lt = kron<Rational>(l, MatQ::Identity(10, 10)) + kron<Rational>(MatQ::Identity(5, 5), l2);
  auto content_t = so3_weight_content(lt, 6);
  std::vector<std::pair<int, int>> want{{1, 2}, {2, 2}, {3, 2}, {4, 1}, {5, 1}};
  CHECK(content_t == want);
}

TEST_CASE("isotypic dimensions for u(3), g2 and spin(7) intrinsic-torsion spaces") {
  // u(3) on R^6 (x) m: 2, 16, 12, 6; the full Casimir alone merges two
  // components, the center Casimir separates them
  {
    auto u3 = unitary_subalgebra<Rational>(3);
    auto m = complement_in_so(u3, 6);
    auto [def, rho] = vector_tensor_m_action(u3, m);
    auto blocks = isotypic_blocks<Rational>(def, rho);
    CHECK(block_dims(blocks) == std::vector<int>{2, 6, 12, 16});
  }
  // g2 on R^7 (x) m: 1, 7, 14, 27
  {
    auto g2 = form_stabilizer_subalgebra(g2_three_form<Rational>());
    auto m = complement_in_so(g2, 7);
    CHECK(static_cast<int>(m.size()) == 7);
    auto [def, rho] = vector_tensor_m_action(g2, m);
    auto cas = casimir_from_ops<Rational>(def, rho);
    auto blocks = casimir_spectrum<Rational>(cas);
    CHECK(block_dims(blocks) == std::vector<int>{1, 7, 14, 27});
  }
  // spin(7) on R^8 (x) m: 8, 48
  {
    auto rows = spinor_stabilizer_table_dim8();
    auto blades = blade_basis<Rational>(8, 2);
    std::vector<FormQ> spin7;
    for (int c = 0; c < rows.front().basis.cols(); ++c) {
      FormQ f(8);
      for (int a = 0; a < rows.front().basis.rows(); ++a) f += blades[a] * rows.front().basis(a, c);
      spin7.push_back(f);
    }
    REQUIRE(rows.front().group == "spin7");
    auto m = complement_in_so(spin7, 8);
    CHECK(static_cast<int>(m.size()) == 7);
    auto [def, rho] = vector_tensor_m_action(spin7, m);
    auto cas = casimir_from_ops<Rational>(def, rho);
    auto blocks = casimir_spectrum<Rational>(cas);
    CHECK(block_dims(blocks) == std::vector<int>{8, 48});
  }
}

TEST_CASE("Lambda^3 isotypic content under g2 and spin(7)") {
  {
    auto g2 = form_stabilizer_subalgebra(g2_three_form<Rational>());
    std::vector<MatQ> def, rho;
    for (const auto& a : g2) {
      def.push_back(so_matrix(a));
      rho.push_back(so_action_on_grade(a, 3));
    }
    auto blocks = casimir_spectrum<Rational>(casimir_from_ops<Rational>(def, rho));
    CHECK(block_dims(blocks) == std::vector<int>{1, 7, 27});
  }
  {
    auto rows = spinor_stabilizer_table_dim8();
    auto blades = blade_basis<Rational>(8, 2);
    std::vector<FormQ> spin7;
    for (int c = 0; c < rows.front().basis.cols(); ++c) {
      FormQ f(8);
      for (int a = 0; a < rows.front().basis.rows(); ++a) f += blades[a] * rows.front().basis(a, c);
      spin7.push_back(f);
    }
    std::vector<MatQ> def, rho;
    for (const auto& a : spin7) {
      def.push_back(so_matrix(a));
      rho.push_back(so_action_on_grade(a, 3));
    }
    auto blocks = casimir_spectrum<Rational>(casimir_from_ops<Rational>(def, rho));
    CHECK(block_dims(blocks) == std::vector<int>{8, 48});
  }
}
