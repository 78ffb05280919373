#ifndef TORSIONFORGE_SURFACE_HPP
#define TORSIONFORGE_SURFACE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace torsionforge {

/// Surface of revolution M(s,phi) = (r(s)cos phi, r(s)sin phi, h(s)) with
/// arclength profile r'^2 + h'^2 = 1; metric diag(1, r(s)^2) in (s, phi).
struct SurfaceOfRevolution {
  std::string name;
  std::function<double(double)> r, rp, rpp;
  double s_min = 0, s_max = 0;

  double gauss_curvature(double s) const { return -rpp(s) / r(s); }

  bool arclength_ok(int samples = 64, double tol = 1e-8) const {
    for (int i = 0; i <= samples; ++i) {
      double s = s_min + (s_max - s_min) * i / samples;
      if (std::abs(rp(s)) > 1.0 + tol || r(s) <= 0) return false;
    }
    return true;
  }

  static SurfaceOfRevolution sphere() {
    SurfaceOfRevolution m;
    m.name = "sphere";
    m.r = [](double s) { return std::sin(s); };
    m.rp = [](double s) { return std::cos(s); };
    m.rpp = [](double s) { return -std::sin(s); };
    m.s_min = 1e-3;
    m.s_max = M_PI - 1e-3;
    return m;
  }

  static SurfaceOfRevolution pseudosphere() {
    SurfaceOfRevolution m;
    m.name = "pseudosphere";
    m.r = [](double s) { return std::exp(-s); };
    m.rp = [](double s) { return -std::exp(-s); };
    m.rpp = [](double s) { return std::exp(-s); };
    m.s_min = 1e-2;
    m.s_max = 40.0;
    return m;
  }

  static SurfaceOfRevolution catenoid() {
    SurfaceOfRevolution m;
    m.name = "catenoid";
    m.r = [](double s) { return std::sqrt(1.0 + s * s); };
    m.rp = [](double s) { return s / std::sqrt(1.0 + s * s); };
    m.rpp = [](double s) { return 1.0 / std::pow(1.0 + s * s, 1.5); };
    m.s_min = -20.0;
    m.s_max = 20.0;
    return m;
  }

  static SurfaceOfRevolution by_name(const std::string& n) {
    if (n == "sphere") return sphere();
    if (n == "pseudosphere") return pseudosphere();
    if (n == "catenoid") return catenoid();
    throw std::invalid_argument("unknown surface: " + n);
  }
};

/// Conformal factor data: sigma and derivatives as functions of s. The
/// vectorial torsion field is V = -grad(sigma) = -sigma'(s) e_1.
struct ConformalFactor {
  std::function<double(double)> sigma, sigma_p, sigma_pp;

  static ConformalFactor zero() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  }
  /// sigma = -ln r(s): the flat "constant-angle" connection; its geodesics
  /// are the loxodromes and the chart (phi, int ds/r) is Euclidean.
  static ConformalFactor log_radius(const SurfaceOfRevolution& m) {
    return {[m](double s) { return -std::log(m.r(s)); },
            [m](double s) { return -m.rp(s) / m.r(s); },
            [m](double s) {
              double r = m.r(s), rp = m.rp(s), rpp = m.rpp(s);
              return -(rpp * r - rp * rp) / (r * r);
            }};
  }
};

struct TrajectoryState {
  double s = 0, phi = 0, sdot = 0, phidot = 0, t = 0;
  bool left_domain = false;
};

namespace detail {

struct Deriv {
  double ds, dphi, dsdot, dphidot;
};

/// nabla_{gamma'} gamma' = 0 for nabla = nabla^g + A with
/// A(X,Y) = g(X,Y)V - g(V,Y)X, V = v(s) e_1.
inline Deriv vectorial_geodesic_rhs(const SurfaceOfRevolution& m, const std::function<double(double)>& v_of_s,
                                    const TrajectoryState& y) {
  double r = m.r(y.s), rp = m.rp(y.s);
  double v = v_of_s(y.s);
  double speed2 = y.sdot * y.sdot + r * r * y.phidot * y.phidot;
  double g_v_dot = v * y.sdot;
  double a_s = speed2 * v - g_v_dot * y.sdot;     // d_s component of A(gamma',gamma')
  double a_phi = -g_v_dot * y.phidot;             // d_phi component
  Deriv d;
  d.ds = y.sdot;
  d.dphi = y.phidot;
  d.dsdot = r * rp * y.phidot * y.phidot - a_s;
  d.dphidot = -2.0 * (rp / r) * y.sdot * y.phidot - a_phi;
  return d;
}

/// Levi-Civita geodesics of g~ = e^{2 sigma(s)} g: metric diag(A, B) with
/// A = e^{2s}, B = e^{2s} r^2.
inline Deriv conformal_geodesic_rhs(const SurfaceOfRevolution& m, const ConformalFactor& cf,
                                    const TrajectoryState& y) {
  double r = m.r(y.s), rp = m.rp(y.s);
  double sp = cf.sigma_p(y.s);
  // Christoffels of diag(A(s), B(s)): G^s_ss = A'/2A, G^s_pp = -B'/2A,
  // G^p_sp = B'/2B with A = e^{2sig}, B = e^{2sig} r^2
  double a_ratio = sp;                       // A'/2A = sigma'
  double b_over_a = r * (sp * r + rp);       // B'/(2A) = e^{2s}(2s' r^2 + 2 r r')/(2 e^{2s})
  double b_ratio = sp + rp / r;              // B'/2B
  Deriv d;
  d.ds = y.sdot;
  d.dphi = y.phidot;
  d.dsdot = -a_ratio * y.sdot * y.sdot + b_over_a * y.phidot * y.phidot;
  d.dphidot = -2.0 * b_ratio * y.sdot * y.phidot;
  return d;
}

template <class Rhs>
TrajectoryState rk4_step(const SurfaceOfRevolution& m, const Rhs& rhs, const TrajectoryState& y, double dt) {
  auto add = [](const TrajectoryState& a, const Deriv& d, double h) {
    TrajectoryState b = a;
    b.s += h * d.ds;
    b.phi += h * d.dphi;
    b.sdot += h * d.dsdot;
    b.phidot += h * d.dphidot;
    return b;
  };
  Deriv k1 = rhs(y);
  Deriv k2 = rhs(add(y, k1, dt / 2));
  Deriv k3 = rhs(add(y, k2, dt / 2));
  Deriv k4 = rhs(add(y, k3, dt));
  TrajectoryState out = y;
  out.s += dt / 6 * (k1.ds + 2 * k2.ds + 2 * k3.ds + k4.ds);
  out.phi += dt / 6 * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);
  out.sdot += dt / 6 * (k1.dsdot + 2 * k2.dsdot + 2 * k3.dsdot + k4.dsdot);
  out.phidot += dt / 6 * (k1.dphidot + 2 * k2.dphidot + 2 * k3.dphidot + k4.dphidot);
  out.t += dt;
  if (out.s <= m.s_min || out.s >= m.s_max || m.r(out.s) <= 1e-12) out.left_domain = true;
  return out;
}

}  // namespace detail

/// One classical fourth-order Runge-Kutta step of the vectorial-torsion
/// geodesic equation; leaving the chart raises the boundary flag.
inline TrajectoryState vectorial_geodesic_step(const SurfaceOfRevolution& m, const ConformalFactor& cf,
                                               const TrajectoryState& y, double dt) {
  if (dt <= 0) throw std::invalid_argument("vectorial_geodesic_step: dt must be positive");
  auto v = [&cf](double s) { return -cf.sigma_p(s); };
  return detail::rk4_step(m, [&](const TrajectoryState& st) { return detail::vectorial_geodesic_rhs(m, v, st); },
                          y, dt);
}

struct TrajectorySample {
  TrajectoryState state;
  double invariant = 0;   // e^sigma g(gamma', d_phi)
  double chart_y = 0;     // int ds/r along the flow, the conformal chart ordinate
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool hit_boundary = false;
};

/// Integrates the connection geodesic with fixed step dt, recording the
/// Clairaut-type invariant e^sigma g(gamma', d_phi).
inline Trajectory integrate_vectorial_geodesic(const SurfaceOfRevolution& m, const ConformalFactor& cf,
                                               TrajectoryState y0, double dt, int steps) {
  Trajectory out;
  out.samples.reserve(steps + 1);
  auto v = [&cf](double s) { return -cf.sigma_p(s); };
  auto rhs = [&](const TrajectoryState& st) { return detail::vectorial_geodesic_rhs(m, v, st); };
  TrajectoryState y = y0;
  double chart_y = 0;
  auto record = [&](const TrajectoryState& st) {
    TrajectorySample smp;
    smp.state = st;
    double r = m.r(st.s);
    smp.invariant = std::exp(cf.sigma(st.s)) * r * r * st.phidot;
    smp.chart_y = chart_y;
    out.samples.push_back(smp);
  };
  record(y);
  for (int k = 0; k < steps; ++k) {
    TrajectoryState mid = detail::rk4_step(m, rhs, y, dt / 2);     // chart quadrature midpoint only
    TrajectoryState next = detail::rk4_step(m, rhs, y, dt);
    chart_y += dt / 6 * (y.sdot / m.r(y.s) + 4 * mid.sdot / m.r(mid.s) + next.sdot / m.r(next.s));
    y = next;
    record(y);
    if (y.left_domain) {
      out.hit_boundary = true;
      break;
    }
  }
  return out;
}

/// Maximal drift of the invariant from its initial value.
inline double invariant_drift(const Trajectory& tr) {
  if (tr.samples.empty()) return 0;
  double v0 = tr.samples.front().invariant, worst = 0;
  for (const auto& s : tr.samples) worst = std::max(worst, std::abs(s.invariant - v0));
  return worst;
}

/// Standard deviation of the angle against the parallels along the flow
/// (for unit-speed trajectories of the log-radius connection this is the
/// loxodrome constant-angle statistic).
inline double angle_deviation(const SurfaceOfRevolution& m, const Trajectory& tr) {
  std::vector<double> ang;
  for (const auto& s : tr.samples) {
    double r = m.r(s.state.s);
    double c2 = r * s.state.phidot;  // g(gamma', e_2)
    double c1 = s.state.sdot;
    ang.push_back(std::atan2(c1, c2));
  }
  double mean = 0;
  for (double a : ang) mean += a;
  mean /= static_cast<double>(ang.size());
  double var = 0;
  for (double a : ang) var += (a - mean) * (a - mean);
  return std::sqrt(var / static_cast<double>(ang.size()));
}

struct ConformalCompareReport {
  double max_line_residual = 0;       // straightness of the (phi, chart_y) image
  double trace_deviation = 0;         // nabla-trajectory vs independent g~-geodesic
  double conformal_curvature_spread = 0;
  double conformal_curvature_mean = 0;
  double connection_curvature_mismatch = 0;  // conformal-formula K~ vs nabla connection-form route
  double base_curvature_spread = 0;   // spread of the Gauss curvature of g along the flow
};

/// Runs the conformal comparison: an independently integrated Levi-Civita
/// geodesic of g~ = e^{2 sigma} g must trace the same curve, the conformal
/// chart image must be a straight line (for sigma = -ln r), and the
/// curvature of the nabla connection-form route must match the conformal
/// Gauss curvature.
inline ConformalCompareReport conformal_compare(const SurfaceOfRevolution& m, const ConformalFactor& cf,
                                                const TrajectoryState& y0, double dt, int steps) {
  ConformalCompareReport rep;
  Trajectory tr = integrate_vectorial_geodesic(m, cf, y0, dt, steps);

  // least-squares line chart_y = a phi + b
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(tr.samples.size());
    for (const auto& s : tr.samples) {
      sx += s.state.phi;
      sy += s.chart_y;
      sxx += s.state.phi * s.state.phi;
      sxy += s.state.phi * s.chart_y;
    }
    double det = n * sxx - sx * sx;
    double a = 0, b = sy / std::max(1, n);
    if (std::abs(det) > 1e-14) {
      a = (n * sxy - sx * sy) / det;
      b = (sy * sxx - sx * sxy) / det;
    }
    for (const auto& s : tr.samples)
      rep.max_line_residual = std::max(rep.max_line_residual, std::abs(s.chart_y - (a * s.state.phi + b)));
  }

  // independent g~-geodesic from the same point and direction
  {
    auto rhs = [&](const TrajectoryState& st) { return detail::conformal_geodesic_rhs(m, cf, st); };
    TrajectoryState z = y0;
    std::vector<TrajectoryState> conf;
    conf.push_back(z);
    // use the same parameter span; the traces, not the parametrizations,
    // are compared
    for (int k = 0; k < steps && !z.left_domain; ++k) {
      z = detail::rk4_step(m, rhs, z, dt);
      conf.push_back(z);
    }
    auto dist_to_polyline = [&](double s, double phi) {
      double best = 1e300;
      for (std::size_t i = 1; i < conf.size(); ++i) {
        double ax = conf[i - 1].s, ay = conf[i - 1].phi, bx = conf[i].s, by = conf[i].phi;
        double vx = bx - ax, vy = by - ay;
        double den = vx * vx + vy * vy;
        double u = den > 0 ? std::clamp(((s - ax) * vx + (phi - ay) * vy) / den, 0.0, 1.0) : 0.0;
        double dx = s - (ax + u * vx), dy = phi - (ay + u * vy);
        best = std::min(best, std::hypot(dx, dy));
      }
      return best;
    };
    int stride = std::max(1, static_cast<int>(tr.samples.size()) / 200);
    for (std::size_t i = 0; i < tr.samples.size(); i += stride) {
      const auto& st = tr.samples[i].state;
      // skip the trailing 10%: the reparametrized curves end at different points
      if (i + stride >= tr.samples.size()) break;
      if (static_cast<double>(i) > 0.9 * static_cast<double>(tr.samples.size())) break;
      rep.trace_deviation = std::max(rep.trace_deviation, dist_to_polyline(st.s, st.phi));
    }
  }

  // curvature bookkeeping along the flow
  {
    bool first = true;
    double lo = 0, hi = 0, acc = 0, blo = 0, bhi = 0;
    for (const auto& smp : tr.samples) {
      double s = smp.state.s;
      double r = m.r(s), rp = m.rp(s);
      double kg = m.gauss_curvature(s);
      double lap = cf.sigma_pp(s) + (rp / r) * cf.sigma_p(s);
      double ktilde = std::exp(-2 * cf.sigma(s)) * (kg - lap);
      // connection-form route: omega^nabla_12 = (r' - r v) dphi with
      // v = -sigma', curvature against the g~ area form
      double v = -cf.sigma_p(s);
      double w = rp - r * v;
      double wp = m.rpp(s) - rp * v + r * (cf.sigma_pp(s) + 0) * 1.0;  // d/ds (r' - r v), v' = -sigma''
      // wp = r'' - r' v - r v' = r'' + r' sigma' ... with v = -sigma'
      wp = m.rpp(s) + rp * cf.sigma_p(s) + r * cf.sigma_pp(s);
      double area = std::exp(2 * cf.sigma(s)) * r;
      double k_conn = -wp / area;
      (void)w;
      rep.connection_curvature_mismatch = std::max(rep.connection_curvature_mismatch, std::abs(k_conn - ktilde));
      acc += ktilde;
      if (first) {
        lo = hi = ktilde;
        blo = bhi = kg;
        first = false;
      } else {
        lo = std::min(lo, ktilde);
        hi = std::max(hi, ktilde);
        blo = std::min(blo, kg);
        bhi = std::max(bhi, kg);
      }
    }
    rep.conformal_curvature_mean = tr.samples.empty() ? 0 : acc / static_cast<double>(tr.samples.size());
    rep.conformal_curvature_spread = hi - lo;
    rep.base_curvature_spread = bhi - blo;
  }
  return rep;
}

}  // namespace torsionforge

#endif
