// Command-line entry point: regenerates the stabilizer tables, runs
// left-invariant geometry reports, closures, geodesic integrations and the
// full invariant suite, emitting machine-readable report envelopes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "torsionforge/connection.hpp"
#include "torsionforge/embeddings.hpp"
#include "torsionforge/gstructure.hpp"
#include "torsionforge/io.hpp"
#include "torsionforge/report.hpp"
#include "torsionforge/stabilizer.hpp"
#include "torsionforge/surface.hpp"
#include "torsionforge/tables.hpp"

using namespace torsionforge;
using nlohmann::json;

namespace {

std::string fixture_dir(const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("TORSION_FORGE_FIXTURES")) return env;
#ifdef TORSIONFORGE_FIXTURE_DIR
  return TORSIONFORGE_FIXTURE_DIR;
#else
  return "fixtures";
#endif
}

json row_to_json(const SpinorStabilizerRow& r) {
  json j;
  j["dim"] = r.dim;
  j["invariants_plus"] = r.invariants_plus;
  j["invariants_minus"] = r.invariants_minus;
  return j;
}

ReportEnvelope cmd_tables(const std::string& fixtures, const std::string& row_filter) {
  ReportEnvelope env("tables");
  json golden = load_json_file(fixtures + "/golden_tables.json");
  env.set_input(golden);

  auto rows = spinor_stabilizer_table_dim8();
  json got_rows;
  for (const auto& r : rows) {
    if (!row_filter.empty() && r.group != row_filter) continue;
    got_rows[r.group] = row_to_json(r);
    json want = golden.at("spinor_stabilizers_dim8").at(r.group);
    env.check("dim8/" + r.group, want, row_to_json(r));
  }
  env.results()["spinor_stabilizers_dim8"] = got_rows;

  if (row_filter.empty()) {
    json counts;
    for (auto [n, v] : three_form_dimension_count()) {
      counts[std::to_string(n)] = v;
      env.check("dimension_count/" + std::to_string(n),
                golden.at("three_form_dimension_count").at(std::to_string(n)), json(v));
    }
    env.results()["three_form_dimension_count"] = counts;
  }
  return env;
}

json identity_report_json(const IdentityReport& r) {
  json j;
  j["curvature_skew_adjoint"] = r.curvature_skew_adjoint;
  j["scal_relation"] = r.scal_relation;
  j["ricci_antisymmetry"] = r.ricci_antisymmetry;
  j["first_bianchi"] = r.first_bianchi;
  j["riemann_relation"] = r.riemann_relation;
  j["dT_is_2sigma"] = r.dT_is_2sigma;
  j["nabla_t_zero"] = r.nabla_t_zero;
  return j;
}

ReportEnvelope cmd_liegroup(const std::string& path) {
  ReportEnvelope env("liegroup");
  json input = load_json_file(path);
  env.set_input(input);
  auto data = liealg_from_json<Rational>(input);
  auto lc = koszul_levi_civita(data);
  auto curv_g = curvature(lc, data);
  env.results()["scal_g"] = curv_g.scal.to_double();
  env.results()["dim"] = data.n;
  env.results()["dim_m"] = data.dim_m();

  bool ricci_flat = true;
  for (int i = 0; i < data.dim_m(); ++i)
    for (int j = 0; j < data.dim_m(); ++j)
      if (!curv_g.ricci(i, j).is_zero()) ricci_flat = false;
  env.results()["ricci_flat"] = ricci_flat;

  Form<Rational> torsion(data.dim_m());
  bool have_torsion = false;
  if (input.contains("structure") && input.at("structure").at("kind") == "contact") {
    const auto& st = input.at("structure");
    AlmostContact<Rational> desc;
    desc.xi = VecQ::Zero(data.dim_m());
    auto xi = st.at("xi");
    for (int i = 0; i < data.dim_m(); ++i) desc.xi(i) = rational_from_json(xi.at(i));
    desc.phi = MatQ::Zero(data.dim_m(), data.dim_m());
    for (int r = 0; r < data.dim_m(); ++r)
      for (int c = 0; c < data.dim_m(); ++c) desc.phi(r, c) = rational_from_json(st.at("phi").at(r).at(c));
    auto res = contact_char_torsion(desc, data);
    if (!res.torsion) {
      env.results()["characteristic_connection"] = res.refusal;
    } else {
      torsion = *res.torsion;
      have_torsion = true;
      env.results()["characteristic_torsion"] = form_to_json(torsion);
    }
  }

  if (have_torsion) {
    auto conn = with_torsion(lc, data, torsion);
    auto curv_n = curvature(conn, data);
    env.results()["torsion_norm_squared"] = torsion.norm_squared().to_double();
    env.results()["scal_n"] = curv_n.scal.to_double();
    auto idrep = verify_connection_identities(data, conn);
    env.results()["identities"] = identity_report_json(idrep);
    env.check("identity_suite", json(true), json(idrep.all()));
    if (data.metric_is_identity()) {
      auto rep = build_gamma_rep<RationalComplex>(data.dim_m());
      auto spinors = parallel_spinors(rep, conn, data);
      env.results()["parallel_spinors"] = static_cast<int>(spinors.size());
      if (!spinors.empty()) {
        auto srep = string_identity_check(rep, data, conn, spinors.front());
        json sj;
        sj["mu"] = srep.mu.to_double();
        sj["residual_norm_identity"] = srep.residual_norm_identity;
        sj["residual_scal_identity"] = srep.residual_scal_identity;
        sj["residual_dt_action"] = srep.residual_dt_action;
        env.results()["string_identities"] = sj;
        env.check_below("string_identity_residual",
                        std::max({srep.residual_norm_identity, srep.residual_scal_identity,
                                  srep.residual_dt_action}),
                        1e-9);
      }
    }
  } else if (data.metric_is_identity()) {
    auto rep = build_gamma_rep<RationalComplex>(data.dim_m());
    auto spinors = parallel_spinors(rep, lc, data);
    env.results()["parallel_spinors_levi_civita"] = static_cast<int>(spinors.size());
  }
  return env;
}

ReportEnvelope cmd_stabilizer(const std::string& expr, int dim) {
  ReportEnvelope env("stabilizer");
  env.set_input_text(expr + "@" + std::to_string(dim));
  FormQ target = parse_form_expr<Rational>(expr, dim);
  auto basis = form_stabilizer_subalgebra(target);
  env.results()["target"] = form_to_json(target);
  env.results()["ambient"] = "so(" + std::to_string(dim) + ")";
  env.results()["dimension"] = static_cast<int>(basis.size());
  env.check("bracket_closed", json(true), json(bracket_closed(basis)));
  return env;
}

ReportEnvelope cmd_closure(const std::string& expr, int dim) {
  ReportEnvelope env("closure");
  env.set_input_text(expr + "@" + std::to_string(dim));
  FormQ t = parse_form_expr<Rational>(expr, dim);
  std::vector<FormQ> gens;
  for (int i = 1; i <= dim; ++i) {
    FormQ g = interior(i, t);
    if (!g.is_zero()) gens.push_back(g);
  }
  auto closure = lie_closure(gens);
  auto derived = derived_algebra(closure);
  env.results()["target"] = form_to_json(t);
  env.results()["generators"] = static_cast<int>(gens.size());
  env.results()["dimension"] = static_cast<int>(closure.size());
  env.results()["derived_dimension"] = static_cast<int>(derived.size());
  env.check("bracket_closed", json(true), json(bracket_closed(closure)));
  return env;
}

void write_csv(const std::string& path, const Trajectory& tr) {
  std::ofstream out(path);
  out << "t,s,phi,sdot,phidot,invariant\n";
  out.precision(15);
  for (const auto& smp : tr.samples) {
    out << smp.state.t << "," << smp.state.s << "," << smp.state.phi << "," << smp.state.sdot << ","
        << smp.state.phidot << "," << smp.invariant << "\n";
  }
}

void write_svg(const std::string& path, const Trajectory& tr) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : tr.samples) {
    xmin = std::min(xmin, s.state.phi);
    xmax = std::max(xmax, s.state.phi);
    ymin = std::min(ymin, s.chart_y);
    ymax = std::max(ymax, s.chart_y);
  }
  double w = 640, h = 480, pad = 20;
  auto sx = [&](double x) { return pad + (x - xmin) / std::max(1e-12, xmax - xmin) * (w - 2 * pad); };
  auto sy = [&](double y) { return h - pad - (y - ymin) / std::max(1e-12, ymax - ymin) * (h - 2 * pad); };
  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  out.precision(8);
  for (const auto& s : tr.samples) out << sx(s.state.phi) << "," << sy(s.chart_y) << " ";
  out << "\"/>\n</svg>\n";
}

ReportEnvelope cmd_geodesic(const std::string& surface_name, const std::string& sigma_kind, double s0,
                            double angle_deg, double dt, int steps, const std::string& csv_path,
                            const std::string& svg_path) {
  ReportEnvelope env("geodesic");
  env.set_input_text(surface_name + "/" + sigma_kind + "/" + std::to_string(s0) + "/" +
                     std::to_string(angle_deg) + "/" + std::to_string(dt) + "/" + std::to_string(steps));
  auto m = SurfaceOfRevolution::by_name(surface_name);
  ConformalFactor cf = sigma_kind == "zero" ? ConformalFactor::zero() : ConformalFactor::log_radius(m);
  TrajectoryState y0;
  y0.s = s0;
  double ang = angle_deg * M_PI / 180.0;
  y0.sdot = -std::sin(ang);
  y0.phidot = std::cos(ang) / m.r(s0);
  auto tr = integrate_vectorial_geodesic(m, cf, y0, dt, steps);
  env.results()["surface"] = surface_name;
  env.results()["sigma"] = sigma_kind;
  env.results()["samples"] = static_cast<int>(tr.samples.size());
  env.results()["hit_boundary"] = tr.hit_boundary;
  env.results()["invariant_drift"] = invariant_drift(tr);
  if (sigma_kind != "zero") env.results()["angle_deviation"] = angle_deviation(m, tr);
  auto cmp = conformal_compare(m, cf, y0, dt, steps);
  env.results()["max_line_residual"] = cmp.max_line_residual;
  env.results()["trace_deviation"] = cmp.trace_deviation;
  env.results()["conformal_curvature_mean"] = cmp.conformal_curvature_mean;
  env.results()["conformal_curvature_spread"] = cmp.conformal_curvature_spread;
  env.results()["base_curvature_spread"] = cmp.base_curvature_spread;
  env.check_below("invariant_drift", invariant_drift(tr), 1e-6);
  if (!csv_path.empty()) {
    write_csv(csv_path, tr);
    env.results()["csv"] = csv_path;
  }
  if (!svg_path.empty()) {
    write_svg(svg_path, tr);
    env.results()["svg"] = svg_path;
  }
  return env;
}

ReportEnvelope cmd_verify(const std::string& fixtures) {
  ReportEnvelope env("verify");
  env.set_input_text("builtin-suite");
  std::mt19937 rng(7u);
  std::uniform_int_distribution<int> coef(-3, 3);

  // Clifford identity block on random 3-forms
  {
    bool square_ok = true, three_t_ok = true;
    for (int trial = 0; trial < 40; ++trial) {
      int n = 3 + trial % 6;
      FormQ t(n);
      for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == 3) t[m] = Rational(coef(rng));
      auto [scal, four] = clifford_square_parts(t);
      FormQ sq = gp(t, t);
      square_ok = square_ok && sq.grade_part(2).is_zero() && sq.grade_part(6).is_zero();
      square_ok = square_ok && (scal == t.norm_squared());
      FormQ sig = sigma_3form(t);
      square_ok = square_ok && (four == sig * Rational(-2));
      FormQ sum(n);
      for (int i = 1; i <= n; ++i) sum += gp(FormQ::basis_vector(n, i), interior(i, t));
      three_t_ok = three_t_ok && (sum == t * Rational(3));
    }
    env.check("clifford/square_parts", json(true), json(square_ok));
    env.check("clifford/three_t_identity", json(true), json(three_t_ok));
  }

  // torsion space dimensions and round trips
  {
    bool ok = true;
    for (int n = 3; n <= 6; ++n) {
      TorsionTensor<Rational> t(n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = 0; k < n; ++k) t.set(i, j, k, Rational(coef(rng)));
      auto a = t_to_a(t);
      ok = ok && (a_to_t(a) - t).is_zero();
      auto dec = decompose_torsion(t);
      ok = ok && (recompose(dec) - t).is_zero();
    }
    env.check("torsion/roundtrip_and_decompose", json(true), json(ok));
  }

  // closure dimensions
  {
    auto dim_of = [&](const std::string& expr, int dim) {
      FormQ t = parse_form_expr<Rational>(expr, dim);
      std::vector<FormQ> gens;
      for (int i = 1; i <= dim; ++i) {
        FormQ g = interior(i, t);
        if (!g.is_zero()) gens.push_back(g);
      }
      return static_cast<int>(lie_closure(gens).size());
    };
    env.check("closure/cartan_r3", json(3), json(dim_of("-2e123", 3)));
    env.check("closure/e1234", json(10), json(dim_of("e1234", 5)));
    env.check("closure/e1234+e3456", json(21), json(dim_of("e1234+e3456", 6)));
    env.check("closure/volume6", json(21), json(dim_of("e123456", 6)));
    env.check("closure/rank8_2form", json(36), json(dim_of("e12+2e34+3e56+4e78", 8)));
  }

  // tables
  {
    json golden = load_json_file(fixtures + "/golden_tables.json");
    auto rows = spinor_stabilizer_table_dim8();
    bool ok = true;
    for (const auto& r : rows) ok = ok && (golden.at("spinor_stabilizers_dim8").at(r.group) == row_to_json(r));
    env.check("tables/dim8", json(true), json(ok));
  }

  // fixture identity suite
  {
    bool ok = true;
    for (const char* name : {"su2", "heisenberg5", "so3xso3_so2", "sol_g2"}) {
      auto data = liealg_from_json<Rational>(load_json_file(fixtures + "/" + name + ".json"));
      auto lc = koszul_levi_civita(data);
      ConnectionData<Rational> conn = lc;
      if (std::string(name) == "heisenberg5") {
        FormQ tc = parse_form_expr<Rational>("2e125+2e345", 5);
        conn = with_torsion(lc, data, tc);
      } else if (data.naturally_reductive()) {
        conn = reductive_family(data, Rational(1)).connection;
      }
      ok = ok && verify_connection_identities(data, conn).all();
    }
    env.check("fixtures/identity_suite", json(true), json(ok));
  }

  // geodesic drift
  {
    auto m = SurfaceOfRevolution::sphere();
    auto cf = ConformalFactor::log_radius(m);
    TrajectoryState y0;
    y0.s = M_PI / 2;
    double ang = std::acos(0.995);
    y0.sdot = -std::sin(ang);
    y0.phidot = std::cos(ang) / m.r(y0.s);
    auto tr = integrate_vectorial_geodesic(m, cf, y0, 1e-3, 2000);
    env.check_below("geodesic/sphere_drift", invariant_drift(tr), 1e-6);
  }
  return env;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational engine for metric connections with skew torsion"};
  app.require_subcommand(1);

  std::string fixtures_override;
  bool emit_json = true;
  double tol = 1e-10;
  bool exact = true;
  app.add_option("--fixtures", fixtures_override, "fixture directory (overrides TORSION_FORGE_FIXTURES)");
  app.add_flag("--json,!--no-json", emit_json, "emit the JSON report envelope (default on)");
  app.add_option("--tol", tol, "floating tolerance for non-exact checks");
  app.add_flag("--exact,!--float", exact, "prefer exact rational arithmetic (default on)");

  auto* tables = app.add_subcommand("tables", "regenerate the stabilizer tables and diff against golden values");
  std::string row;
  tables->add_option("--row", row, "restrict to a single named row (spin7, su4, sp2, g2, su3, su2)");

  auto* liegroup = app.add_subcommand("liegroup", "left-invariant geometry report for a structure-constants file");
  std::string lg_file;
  liegroup->add_option("file", lg_file, "LieAlgebraData JSON file")->required();

  auto* stab = app.add_subcommand("stabilizer", "stabilizer subalgebra of a form inside so(n)");
  std::string stab_form = "e127+e347-e567+e135-e245+e146+e236";
  int stab_dim = 7;
  stab->add_option("--form", stab_form, "form expression, e.g. e127+e347-e567+...");
  stab->add_option("--dim", stab_dim, "ambient dimension");

  auto* clos = app.add_subcommand("closure", "Lie closure of the contractions of a form in the Clifford algebra");
  std::string clos_form = "e1234";
  int clos_dim = 5;
  clos->add_option("--form", clos_form, "form expression");
  clos->add_option("--dim", clos_dim, "ambient dimension");

  auto* geo = app.add_subcommand("geodesic", "integrate a vectorial-torsion geodesic on a surface of revolution");
  std::string surface = "sphere", sigma = "mercator", csv_path, svg_path;
  double s0 = M_PI / 2, angle = 84.26, dt = 1e-3;
  int steps = 10000;
  geo->add_option("--surface", surface, "sphere | pseudosphere | catenoid");
  geo->add_option("--sigma", sigma, "mercator (= -ln r) | zero");
  geo->add_option("--s0", s0, "initial meridian coordinate");
  geo->add_option("--angle", angle, "initial angle against the parallels, degrees");
  geo->add_option("--dt", dt, "step size");
  geo->add_option("--steps", steps, "number of steps");
  geo->add_option("--csv", csv_path, "write trajectory CSV here");
  geo->add_option("--svg", svg_path, "write an SVG polyline of the conformal chart image");

  auto* verify = app.add_subcommand("verify", "run the full invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    ReportEnvelope env("");
    std::string fixtures = fixture_dir(fixtures_override);
    if (tables->parsed()) env = cmd_tables(fixtures, row);
    else if (liegroup->parsed()) env = cmd_liegroup(lg_file);
    else if (stab->parsed()) env = cmd_stabilizer(stab_form, stab_dim);
    else if (clos->parsed()) env = cmd_closure(clos_form, clos_dim);
    else if (geo->parsed()) env = cmd_geodesic(surface, sigma, s0, angle, dt, steps, csv_path, svg_path);
    else if (verify->parsed()) env = cmd_verify(fixtures);
    if (emit_json) std::cout << env.to_json().dump(2) << "\n";
    return env.exit_code();
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 2;
  }
}
