#ifndef TORSIONFORGE_IO_HPP
#define TORSIONFORGE_IO_HPP

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsionforge/form.hpp"
#include "torsionforge/liealg.hpp"
#include "torsionforge/torsion.hpp"

namespace torsionforge {

using nlohmann::json;

/// Accepts JSON numbers or exact "p/q" strings.
inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return Rational::parse(os.str());
  }
  throw std::invalid_argument("expected a number or \"p/q\" string");
}

inline json rational_to_json(const Rational& r) {
  if (r.is_integer()) {
    double d = r.to_double();
    if (std::abs(d) < 9e15) return json(static_cast<long long>(d));
  }
  return json(r.str());
}

// Forms: {"dim": n, "terms": [{"blade": [i,j,k], "c": coeff}]}
template <class S>
json form_to_json(const Form<S>& f) {
  json terms = json::array();
  for (std::uint32_t m : f.support()) {
    json blade = json::array();
    for (int b = 0; b < f.dim(); ++b)
      if (m & (1u << b)) blade.push_back(b + 1);
    json term;
    term["blade"] = blade;
    if constexpr (scalar_traits<S>::exact)
      term["c"] = rational_to_json(f[m]);
    else
      term["c"] = to_double(f[m]);
    terms.push_back(term);
  }
  json out;
  out["dim"] = f.dim();
  out["terms"] = terms;
  return out;
}

template <class S>
Form<S> form_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("terms")) throw std::invalid_argument("form: /dim and /terms required");
  Form<S> f(j.at("dim").get<int>());
  for (const auto& term : j.at("terms")) {
    std::vector<int> blade = term.at("blade").get<std::vector<int>>();
    Rational c = rational_from_json(term.at("c"));
    f += Form<S>::blade(f.dim(), blade, scalar_traits<S>::from_rational(c));
  }
  return f;
}

// Torsion tensors: {"dim": n, "entries": [{"i":..,"j":..,"k":..,"v":..}]},
// storing only i < j (1-based).
template <class S>
json torsion_to_json(const TorsionTensor<S>& t) {
  json entries = json::array();
  for (int i = 0; i < t.dim(); ++i)
    for (int j = i + 1; j < t.dim(); ++j)
      for (int k = 0; k < t.dim(); ++k) {
        if (scalar_traits<S>::is_zero(t(i, j, k), 0.0)) continue;
        json e;
        e["i"] = i + 1;
        e["j"] = j + 1;
        e["k"] = k + 1;
        if constexpr (scalar_traits<S>::exact)
          e["v"] = rational_to_json(t(i, j, k));
        else
          e["v"] = to_double(t(i, j, k));
        entries.push_back(e);
      }
  json out;
  out["dim"] = t.dim();
  out["entries"] = entries;
  return out;
}

template <class S>
TorsionTensor<S> torsion_from_json(const json& j) {
  TorsionTensor<S> t(j.at("dim").get<int>());
  for (const auto& e : j.at("entries")) {
    int i = e.at("i").get<int>() - 1;
    int jj = e.at("j").get<int>() - 1;
    int k = e.at("k").get<int>() - 1;
    if (i >= jj) throw std::invalid_argument("torsion entries must have i < j");
    t.set(i, jj, k, scalar_traits<S>::from_rational(rational_from_json(e.at("v"))));
  }
  return t;
}

// Lie algebra data:
// {"dim": n, "h": [1-based indices], "brackets": [{"i":1,"j":2,"coeffs":{"3": c}}],
//  "metric_m": [[...]], "Q_h": [[...]], "structure": {...}}
template <class S>
LieAlgebraData<S> liealg_from_json(const json& j) {
  if (!j.contains("dim")) throw std::invalid_argument("lie algebra: /dim required");
  int n = j.at("dim").get<int>();
  std::vector<int> h;
  if (j.contains("h"))
    for (const auto& v : j.at("h")) h.push_back(v.get<int>() - 1);
  auto d = LieAlgebraData<S>::make(n, h);
  if (j.contains("brackets"))
    for (const auto& b : j.at("brackets")) {
      int i = b.at("i").get<int>() - 1;
      int jj = b.at("j").get<int>() - 1;
      if (i < 0 || i >= n || jj < 0 || jj >= n)
        throw std::invalid_argument("lie algebra: bracket index out of range at /brackets");
      for (const auto& [key, val] : b.at("coeffs").items()) {
        int k = std::stoi(key) - 1;
        if (k < 0 || k >= n) throw std::invalid_argument("lie algebra: bracket target out of range at /brackets");
        d.set_bracket(i, jj, k, scalar_traits<S>::from_rational(rational_from_json(val)));
      }
    }
  auto load_matrix = [&](const char* key, MatX<S>& target, int dim) {
    if (!j.contains(key)) return false;
    const auto& rows = j.at(key);
    if (static_cast<int>(rows.size()) != dim) throw std::invalid_argument(std::string("lie algebra: bad shape at /") + key);
    target = MatX<S>::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (static_cast<int>(rows[r].size()) != dim)
        throw std::invalid_argument(std::string("lie algebra: bad shape at /") + key);
      for (int c = 0; c < dim; ++c) target(r, c) = scalar_traits<S>::from_rational(rational_from_json(rows[r][c]));
    }
    return true;
  };
  load_matrix("metric_m", d.metric_m, d.dim_m());
  if (load_matrix("Q_h", d.q_h, d.dim_h())) d.has_q_h = true;
  d.validate();
  return d;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

/// Parses compact blade expressions like "e125", "2e125+3e345-e14",
/// "e(1,10,3)"; single-digit indices unless the parenthesized list form is
/// used.
template <class S>
Form<S> parse_form_expr(const std::string& expr, int dim) {
  Form<S> out(dim);
  std::size_t p = 0;
  auto skip_ws = [&] { while (p < expr.size() && std::isspace(static_cast<unsigned char>(expr[p]))) ++p; };
  skip_ws();
  bool first = true;
  while (p < expr.size()) {
    int sign = 1;
    skip_ws();
    if (expr[p] == '+') { ++p; }
    else if (expr[p] == '-') { sign = -1; ++p; }
    else if (!first) throw std::invalid_argument("parse_form_expr: expected + or - near '" + expr.substr(p) + "'");
    first = false;
    skip_ws();
    // optional rational coefficient
    std::string num;
    while (p < expr.size() && (std::isdigit(static_cast<unsigned char>(expr[p])) || expr[p] == '.' || expr[p] == '/'))
      num.push_back(expr[p++]);
    Rational coeff = num.empty() ? Rational(1) : Rational::parse(num);
    if (sign < 0) coeff = -coeff;
    skip_ws();
    if (p >= expr.size() || expr[p] != 'e') {
      if (num.empty()) throw std::invalid_argument("parse_form_expr: expected a term near '" + expr.substr(p) + "'");
      out += Form<S>::scalar(dim, scalar_traits<S>::from_rational(coeff));
      skip_ws();
      continue;
    }
    ++p;  // consume 'e'
    std::vector<int> idx;
    if (p < expr.size() && expr[p] == '(') {
      ++p;
      while (p < expr.size() && expr[p] != ')') {
        std::string d;
        while (p < expr.size() && std::isdigit(static_cast<unsigned char>(expr[p]))) d.push_back(expr[p++]);
        if (d.empty()) throw std::invalid_argument("parse_form_expr: bad index list");
        idx.push_back(std::stoi(d));
        if (p < expr.size() && expr[p] == ',') ++p;
      }
      if (p >= expr.size()) throw std::invalid_argument("parse_form_expr: unterminated index list");
      ++p;  // consume ')'
    } else {
      while (p < expr.size() && std::isdigit(static_cast<unsigned char>(expr[p]))) idx.push_back(expr[p++] - '0');
    }
    if (idx.empty()) throw std::invalid_argument("parse_form_expr: blade without indices");
    // sort indices, tracking the permutation sign
    for (std::size_t i = 1; i < idx.size(); ++i)
      for (std::size_t q = i; q > 0 && idx[q - 1] > idx[q]; --q) {
        std::swap(idx[q - 1], idx[q]);
        coeff = -coeff;
      }
    out += Form<S>::blade(dim, idx, scalar_traits<S>::from_rational(coeff));
    skip_ws();
  }
  return out;
}

}  // namespace torsionforge

#endif
