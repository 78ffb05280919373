#ifndef TORSIONFORGE_TEST_UTIL_HPP
#define TORSIONFORGE_TEST_UTIL_HPP

#include <random>
#include <string>

#include "torsionforge/form.hpp"
#include "torsionforge/io.hpp"
#include "torsionforge/liealg.hpp"

namespace tf_test {

inline std::string fixture(const std::string& name) {
  return std::string(TORSIONFORGE_FIXTURE_DIR) + "/" + name;
}

inline torsionforge::LieAlgebraData<torsionforge::Rational> load_fixture(const std::string& name) {
  return torsionforge::liealg_from_json<torsionforge::Rational>(
      torsionforge::load_json_file(fixture(name + ".json")));
}

/// Homogeneous random form with small integer coefficients (seeded).
template <class Rng>
torsionforge::Form<torsionforge::Rational> random_form(Rng& rng, int n, int grade, bool nonzero = true) {
  std::uniform_int_distribution<int> coef(-3, 3);
  while (true) {
    torsionforge::Form<torsionforge::Rational> f(n);
    bool nz = false;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      if (std::popcount(m) != grade) continue;
      int v = coef(rng);
      f[m] = torsionforge::Rational(v);
      nz = nz || v != 0;
    }
    if (!nonzero || nz) return f;
  }
}

template <class Rng>
torsionforge::VecX<torsionforge::Rational> random_vector(Rng& rng, int n, bool nonzero = true) {
  std::uniform_int_distribution<int> coef(-3, 3);
  while (true) {
    torsionforge::VecX<torsionforge::Rational> v(n);
    bool nz = false;
    for (int i = 0; i < n; ++i) {
      int c = coef(rng);
      v(i) = torsionforge::Rational(c);
      nz = nz || c != 0;
    }
    if (!nonzero || nz) return v;
  }
}

}  // namespace tf_test

#endif
