#include "threebody/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "threebody/core_model.hpp"
#include "threebody/errors.hpp"

namespace threebody {

Eigen::VectorXd DenseSegment::eval_theta(double theta) const {
  const double th1 = 1.0 - theta;
  if (r.size() == 5)
    return r[0] + theta * (r[1] + th1 * (r[2] + theta * (r[3] + th1 * r[4])));
  return r[0] + theta * (r[1] + th1 * (r[2] + theta * r[3]));
}

Eigen::VectorXd DenseSegment::eval(double t) const { return eval_theta((t - t0) / h); }

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output coefficients of the 5th-order interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

/// Step-size safety factor. Deliberately conservative: long-horizon drift of
/// conserved quantities tracks the accepted local error, and holding that
/// well under the tolerance buys an order of magnitude on orbit-length runs
/// for a modest step-count increase.
constexpr double kSafety = 0.55;

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double abs_tol, double rel_tol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Small initial-step heuristic in the spirit of Hairer's hinit.
double initial_step(const OdeFn& f, double t0, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& f0, const IntegratorConfig& cfg, double T) {
  const double d0 = y0.norm();
  const double d1 = f0.norm();
  double h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6;
  h = std::min({h, 0.1 * T, cfg.max_step});
  Eigen::VectorXd y1 = y0 + h * f0;
  Eigen::VectorXd f1(y0.size());
  try {
    f(t0 + h, y1, f1);
    const double d2 = (f1 - f0).norm() / h;
    const double dm = std::max(d1, d2);
    if (dm > 1e-15) {
      const double h1 = std::pow(0.01 / dm, 0.2);
      h = std::min(100.0 * h, h1);
    }
  } catch (const Error&) {
    h *= 0.01;
  }
  return std::clamp(h, cfg.min_step, std::min(cfg.max_step, T));
}

struct StepResult {
  bool ok = false;          // stage evaluations all finite and collision free
  double err = 0.0;
  Eigen::VectorXd y1;
  Eigen::VectorXd f1;       // FSAL derivative at the end point
  DenseSegment seg;
};

StepResult dopri_step(const OdeFn& f, double t, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& k1, double h, const IntegratorConfig& cfg) {
  StepResult res;
  const Eigen::Index n = y.size();
  Eigen::VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n);
  try {
    yt = y + h * (a21 * k1);
    f(t + c2 * h, yt, k2);
    yt = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, yt, k3);
    yt = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, yt, k4);
    yt = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, yt, k5);
    yt = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, yt, k6);
    res.y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, res.y1, k7);
  } catch (const Error&) {
    return res;  // treated like an unacceptably large error: retry smaller
  }
  if (!finite(res.y1) || !finite(k7)) return res;
  const Eigen::VectorXd err =
      h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  res.err = error_norm(err, y, res.y1, cfg.abs_tol, cfg.rel_tol);
  if (!std::isfinite(res.err)) return res;
  res.ok = true;
  res.f1 = k7;
  res.seg.t0 = t;
  res.seg.h = h;
  const Eigen::VectorXd ydiff = res.y1 - y;
  const Eigen::VectorXd bspl = h * k1 - ydiff;
  res.seg.r.resize(5);
  res.seg.r[0] = y;
  res.seg.r[1] = ydiff;
  res.seg.r[2] = bspl;
  res.seg.r[3] = ydiff - h * k7 - bspl;
  res.seg.r[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
  return res;
}

DenseSegment hermite_segment(double t, double h, const Eigen::VectorXd& y0,
                             const Eigen::VectorXd& f0, const Eigen::VectorXd& y1,
                             const Eigen::VectorXd& f1) {
  DenseSegment seg;
  seg.t0 = t;
  seg.h = h;
  const Eigen::VectorXd ydiff = y1 - y0;
  const Eigen::VectorXd bspl = h * f0 - ydiff;
  seg.r.resize(4);
  seg.r[0] = y0;
  seg.r[1] = ydiff;
  seg.r[2] = bspl;
  seg.r[3] = ydiff - h * f1 - bspl;
  return seg;
}

class Recorder {
 public:
  Recorder(RawTrajectory& out, double sample_dt, double t0) : out_(out), dt_(sample_dt) {
    next_ = t0 + dt_;
  }

  void push(double t, const Eigen::VectorXd& y) {
    out_.times.push_back(t);
    out_.ys.push_back(y);
  }

  // Record the end of an accepted step, emitting uniform samples first when
  // sample_dt is set.
  void step_end(const DenseSegment& seg, double t1, const Eigen::VectorXd& y1) {
    if (dt_ > 0.0) {
      const double eps = 1e-12 * std::max(1.0, std::abs(t1));
      while (next_ <= t1 + eps) {
        push(next_, next_ >= t1 - eps ? y1 : seg.eval(next_));
        next_ += dt_;
      }
    } else {
      push(t1, y1);
    }
  }

  // The final point always gets recorded, whatever the grid says.
  void finish(double t, const Eigen::VectorXd& y) {
    if (out_.times.empty() || out_.times.back() < t) push(t, y);
  }

 private:
  RawTrajectory& out_;
  double dt_;
  double next_ = 0.0;
};

}  // namespace

RawTrajectory integrate_ode(const OdeFn& f, const Eigen::VectorXd& y0, double t0, double T,
                            const IntegratorConfig& cfg, const StopFn& stop) {
  cfg.validate();
  if (!(T > 0.0)) throw ArgumentError("integration span must be positive");
  RawTrajectory out;
  Recorder rec(out, cfg.sample_dt, t0);
  const double t_end = t0 + T;

  double t = t0;
  Eigen::VectorXd y = y0;
  Eigen::VectorXd k1(y.size());
  f(t, y, k1);
  rec.push(t, y);
  if (stop) {
    if (auto verdict = stop(t, y)) {
      out.termination = verdict->first;
      out.termination_detail = verdict->second;
      return out;
    }
  }

  if (cfg.method == Method::RK4Fixed) {
    const Eigen::Index n = y.size();
    Eigen::VectorXd k2(n), k3(n), k4(n), yt(n), y1(n), f1(n);
    while (t < t_end) {
      const double h = std::min(cfg.fixed_step, t_end - t);
      try {
        f(t + 0.5 * h, y + 0.5 * h * k1, k2);
        f(t + 0.5 * h, y + 0.5 * h * k2, k3);
        f(t + h, y + h * k3, k4);
        y1 = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        f(t + h, y1, f1);
      } catch (const Error& e) {
        out.termination = Termination::Singularity;
        out.termination_detail = e.what();
        rec.finish(t, y);
        return out;
      }
      if (!finite(y1)) {
        out.termination = Termination::StepUnderflow;
        out.termination_detail = "non-finite state in fixed-step march";
        rec.finish(t, y);
        return out;
      }
      out.dense.push_back(hermite_segment(t, h, y, k1, y1, f1));
      t += h;
      y.swap(y1);
      k1.swap(f1);
      rec.step_end(out.dense.back(), t, y);
      if (stop) {
        if (auto verdict = stop(t, y)) {
          out.termination = verdict->first;
          out.termination_detail = verdict->second;
          rec.finish(t, y);
          return out;
        }
      }
    }
    rec.finish(t, y);
    return out;
  }

  double h = initial_step(f, t, y, k1, cfg, T);
  while (t < t_end) {
    h = std::min(h, t_end - t);
    const StepResult sr = dopri_step(f, t, y, k1, h, cfg);
    const bool accept = sr.ok && sr.err <= 1.0;
    if (accept) {
      out.dense.push_back(sr.seg);
      t += h;
      y = sr.y1;
      k1 = sr.f1;
      rec.step_end(out.dense.back(), t, y);
      if (stop) {
        if (auto verdict = stop(t, y)) {
          out.termination = verdict->first;
          out.termination_detail = verdict->second;
          rec.finish(t, y);
          return out;
        }
      }
      const double factor =
          sr.err > 0.0 ? std::clamp(kSafety * std::pow(sr.err, -0.2), 0.2, 5.0) : 5.0;
      h = std::min(h * factor, cfg.max_step);
    } else {
      const double factor =
          sr.ok ? std::clamp(kSafety * std::pow(sr.err, -0.2), 0.1, 0.9) : 0.1;
      h *= factor;
    }
    if (h < cfg.min_step && t < t_end) {
      out.termination = Termination::StepUnderflow;
      out.termination_detail = "step size underflow at t = " + std::to_string(t);
      rec.finish(t, y);
      return out;
    }
  }
  rec.finish(t, y);
  return out;
}

Eigen::VectorXd pack_state(const PhaseState& s) {
  Eigen::VectorXd y(12);
  for (int i = 0; i < 3; ++i) {
    y[2 * i] = std::real(s.q[i]);
    y[2 * i + 1] = std::imag(s.q[i]);
    y[6 + 2 * i] = std::real(s.v[i]);
    y[6 + 2 * i + 1] = std::imag(s.v[i]);
  }
  return y;
}

PhaseState unpack_state(const Eigen::VectorXd& y) {
  PhaseState s;
  for (int i = 0; i < 3; ++i) {
    s.q[i] = Complex{y[2 * i], y[2 * i + 1]};
    s.v[i] = Complex{y[6 + 2 * i], y[6 + 2 * i + 1]};
  }
  return s;
}

Eigen::VectorXd pack_reduced(const ReducedState& rs) {
  Eigen::VectorXd y(6);
  y.head<3>() = rs.w;
  y.tail<3>() = rs.wdot;
  return y;
}

ReducedState unpack_reduced(const Eigen::VectorXd& y) {
  return {y.head<3>(), y.tail<3>()};
}

Trajectory integrate(const PhaseState& initial, const MassDistribution& mm, double T,
                     const IntegratorConfig& cfg) {
  accelerations(initial.q, mm);  // rejects collision starts
  const double scale0 = length_scale(initial.q, mm);
  const double collision_radius =
      cfg.collision_radius > 0.0 ? cfg.collision_radius : 1e-9 * scale0;
  const double inertia0 = moment_of_inertia_cm(initial.q, mm);

  OdeFn f = [&mm](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const PhaseState s = unpack_state(y);
    const Config a = accelerations(s.q, mm);
    dy.resize(12);
    for (int i = 0; i < 3; ++i) {
      dy[2 * i] = std::real(s.v[i]);
      dy[2 * i + 1] = std::imag(s.v[i]);
      dy[6 + 2 * i] = std::real(a[i]);
      dy[6 + 2 * i + 1] = std::imag(a[i]);
    }
  };

  StopFn stop = [&](double, const Eigen::VectorXd& y)
      -> std::optional<std::pair<Termination, std::string>> {
    const PhaseState s = unpack_state(y);
    const Eigen::Vector3d r = pairwise_separations(s.q);
    for (Pair p : {Pair::P12, Pair::P23, Pair::P31}) {
      if (r[pair_index(p)] < collision_radius)
        return std::make_pair(Termination::Collision,
                              std::string("bodies ") + pair_name(p) + " within collision radius");
    }
    if (moment_of_inertia_cm(s.q, mm) > cfg.escape_factor * inertia0)
      return std::make_pair(Termination::Escape, "moment of inertia exceeded escape factor");
    return std::nullopt;
  };

  RawTrajectory raw = integrate_ode(f, pack_state(initial), 0.0, T, cfg, stop);

  // A step-size underflow during a collapsing close approach is the
  // collision itself as far as this unregularized flow is concerned.
  if (raw.termination == Termination::StepUnderflow && !raw.ys.empty()) {
    const PhaseState last = unpack_state(raw.ys.back());
    if (pairwise_separations(last.q).minCoeff() < 1e-5 * scale0) {
      raw.termination = Termination::Collision;
      raw.termination_detail += " during close approach";
    }
  }

  Trajectory traj;
  traj.reduced = false;
  traj.times = std::move(raw.times);
  traj.dense = std::move(raw.dense);
  traj.termination = raw.termination;
  traj.termination_detail = std::move(raw.termination_detail);
  traj.states.reserve(raw.ys.size());
  traj.diagnostics.reserve(raw.ys.size());
  for (const auto& y : raw.ys) {
    const PhaseState s = unpack_state(y);
    traj.states.push_back(s);
    SampleDiagnostics d;
    d.H = total_energy(s, mm);
    d.J = angular_momentum(s, mm);
    d.P = linear_momentum(s, mm);
    d.I = moment_of_inertia(s.q, mm);
    traj.diagnostics.push_back(d);
  }
  return traj;
}

Eigen::VectorXd eval_dense(const Trajectory& traj, double t) {
  if (traj.dense.empty()) throw ArgumentError("trajectory has no dense output");
  const auto& segs = traj.dense;
  if (t <= segs.front().t0) return segs.front().eval(t);
  const auto it = std::upper_bound(
      segs.begin(), segs.end(), t,
      [](double tv, const DenseSegment& s) { return tv < s.t0; });
  const DenseSegment& seg = (it == segs.begin()) ? *it : *(it - 1);
  return seg.eval(t);
}

PhaseState state_at(const Trajectory& traj, double t) {
  if (traj.reduced) throw ArgumentError("state_at needs a full trajectory");
  return unpack_state(eval_dense(traj, t));
}

ReducedState reduced_at(const Trajectory& traj, double t) {
  if (!traj.reduced) throw ArgumentError("reduced_at needs a reduced trajectory");
  return unpack_reduced(eval_dense(traj, t));
}

namespace {

using Evaluator = std::function<Eigen::VectorXd(double)>;

// Bisection on the interpolant within [ta, tb], g(ta) g(tb) < 0.
double bisect_zero(const Evaluator& eval, const Observable& obs, double ta, double tb,
                   double ga, double tol) {
  for (int it = 0; it < 200 && (tb - ta) > tol; ++it) {
    const double tm = 0.5 * (ta + tb);
    const double gm = obs(tm, eval(tm));
    if (gm == 0.0) return tm;
    if ((ga < 0.0) == (gm < 0.0)) {
      ta = tm;
      ga = gm;
    } else {
      tb = tm;
    }
  }
  return 0.5 * (ta + tb);
}

// Shared zero-scanning core: walks the intervals between consecutive knots,
// evaluating the trajectory through `eval`. Knots must be strictly
// increasing; for dense output they are the step boundaries, for sampled
// trajectories the sample times.
std::vector<Event> scan_for_events(const Evaluator& eval, const std::vector<double>& knots,
                                   const Observable& obs) {
  std::vector<Event> events;
  if (knots.size() < 2) return events;
  const double span = knots.back() - knots.front();
  if (!(span > 0.0)) return events;
  const double ttol = 1e-10 * span;

  // Scale of the observable, for the grazing threshold.
  double gscale = 0.0;
  for (double t : knots) gscale = std::max(gscale, std::abs(obs(t, eval(t))));
  if (gscale == 0.0) gscale = 1.0;
  const double zero_tol = 1e-12 * gscale;

  auto emit = [&](double t, bool grazing) {
    if (!events.empty() && std::abs(events.back().t - t) <= 2.0 * ttol) return;
    events.push_back({t, eval(t), grazing});
  };

  // Whether a zero of the observable at t is a genuine crossing. At the
  // trajectory boundary only one side exists; there a simple zero shows
  // linear growth well above the tangential quadratic's scale.
  auto transversal_at = [&](double t) {
    const double lo = std::max(knots.front(), t - 8.0 * ttol);
    const double hi = std::min(knots.back(), t + 8.0 * ttol);
    const double gl = obs(lo, eval(lo));
    const double gh = obs(hi, eval(hi));
    const bool have_l = std::abs(gl) > zero_tol;
    const bool have_r = std::abs(gh) > zero_tol;
    if (have_l && have_r) return (gl < 0.0) != (gh < 0.0);
    if (lo == knots.front() && have_r) return std::abs(gh) > 100.0 * zero_tol;
    if (hi == knots.back() && have_l) return std::abs(gl) > 100.0 * zero_tol;
    return false;
  };

  constexpr int kScan = 8;
  for (std::size_t seg = 0; seg + 1 < knots.size(); ++seg) {
    const double t0 = knots[seg];
    const double h = knots[seg + 1] - t0;
    double ts[kScan + 1];
    double gs[kScan + 1];
    for (int k = 0; k <= kScan; ++k) {
      ts[k] = t0 + h * k / kScan;
      gs[k] = obs(ts[k], eval(ts[k]));
    }
    for (int k = 0; k < kScan; ++k) {
      if (std::abs(gs[k]) <= zero_tol) {
        emit(ts[k], !transversal_at(ts[k]));
        continue;
      }
      if (std::abs(gs[k + 1]) <= zero_tol) continue;  // handled as next start
      if ((gs[k] < 0.0) != (gs[k + 1] < 0.0))
        emit(bisect_zero(eval, obs, ts[k], ts[k + 1], gs[k], ttol), false);
    }
    // Tangential zero hunting: local minima of |g| that dip to zero without
    // a sign change.
    for (int k = 1; k < kScan; ++k) {
      const double a0 = std::abs(gs[k - 1]), a1 = std::abs(gs[k]), a2 = std::abs(gs[k + 1]);
      if (a1 > zero_tol && a1 < a0 && a1 < a2 && (gs[k - 1] < 0.0) == (gs[k + 1] < 0.0)) {
        // golden-section refine of |g| on [ts[k-1], ts[k+1]]
        double lo = ts[k - 1], hi = ts[k + 1];
        constexpr double gr = 0.6180339887498949;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = std::abs(obs(x1, eval(x1))), f2 = std::abs(obs(x2, eval(x2)));
        while (hi - lo > ttol) {
          if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = std::abs(obs(x1, eval(x1)));
          } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = std::abs(obs(x2, eval(x2)));
          }
        }
        const double tm = 0.5 * (lo + hi);
        if (std::abs(obs(tm, eval(tm))) <= zero_tol) emit(tm, true);
      }
    }
  }
  // The very last knot can be a zero too.
  const double tb = knots.back();
  const double gb = obs(tb, eval(tb));
  if (std::abs(gb) <= zero_tol) emit(tb, !transversal_at(tb));
  return events;
}

}  // namespace

std::vector<Event> detect_events(const Trajectory& traj, const Observable& obs) {
  if (traj.dense.empty()) return {};
  std::vector<double> knots;
  knots.reserve(traj.dense.size() + 1);
  for (const auto& seg : traj.dense) knots.push_back(seg.t0);
  knots.push_back(traj.dense.back().t0 + traj.dense.back().h);
  return scan_for_events([&](double t) { return eval_dense(traj, t); }, knots, obs);
}

std::vector<Event> detect_events_sampled(const Trajectory& traj, const Observable& obs) {
  const std::size_t n = traj.size();
  if (n < 2) return {};

  std::vector<Eigen::VectorXd> ys(n);
  for (std::size_t k = 0; k < n; ++k)
    ys[k] = traj.reduced ? pack_reduced(traj.rstates[k]) : pack_state(traj.states[k]);

  // Deserialized CSV carries no velocities (they read back as zeros); fall
  // back to linear interpolation there instead of Hermite with flat slopes.
  const Eigen::Index half = ys.front().size() / 2;
  bool have_slopes = false;
  for (const auto& y : ys)
    if (y.tail(half).cwiseAbs().maxCoeff() > 0.0) {
      have_slopes = true;
      break;
    }

  auto eval = [&, half, have_slopes](double t) {
    const auto& times = traj.times;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = (it == times.begin()) ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    k = std::min(k, n - 2);
    const double h = times[k + 1] - times[k];
    const double th = (t - times[k]) / h;
    const auto p0 = ys[k].head(half), p1 = ys[k + 1].head(half);
    Eigen::VectorXd y(2 * half);
    if (have_slopes) {
      const auto m0 = ys[k].tail(half), m1 = ys[k + 1].tail(half);
      const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
      const double h10 = th * (1.0 - th) * (1.0 - th);
      const double h01 = th * th * (3.0 - 2.0 * th);
      const double h11 = th * th * (th - 1.0);
      const double d00 = 6.0 * th * (th - 1.0);
      const double d10 = (1.0 - th) * (1.0 - 3.0 * th);
      const double d01 = 6.0 * th * (1.0 - th);
      const double d11 = th * (3.0 * th - 2.0);
      y.head(half) = h00 * p0 + (h10 * h) * m0 + h01 * p1 + (h11 * h) * m1;
      y.tail(half) = (d00 / h) * p0 + d10 * m0 + (d01 / h) * p1 + d11 * m1;
    } else {
      y.head(half) = p0 + th * (p1 - p0);
      y.tail(half) = (p1 - p0) / h;
    }
    return y;
  };

  return scan_for_events(eval, traj.times, obs);
}

DriftReport drift_report(const Trajectory& traj) {
  DriftReport rep;
  if (traj.diagnostics.size() < 2) return rep;
  const SampleDiagnostics& d0 = traj.diagnostics.front();
  for (const auto& d : traj.diagnostics) {
    rep.dH = std::max(rep.dH, std::abs(d.H - d0.H));
    rep.dJ = std::max(rep.dJ, std::abs(d.J - d0.J));
    rep.dP = std::max(rep.dP, std::abs(d.P - d0.P));
  }
  return rep;
}

}  // namespace threebody
