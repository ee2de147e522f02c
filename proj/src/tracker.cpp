#include "multiwit/tracker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace multiwit {

const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Converged:
      return "converged";
    case PathStatus::Diverged:
      return "diverged";
    case PathStatus::Failed:
      return "failed";
  }
  return "?";
}

Homotopy::Homotopy(int nvars, std::vector<Polynomial> fixed, std::vector<Polynomial> start,
                   std::vector<Polynomial> target, Complex gamma)
    : nvars_(nvars),
      fixed_(std::move(fixed)),
      start_(std::move(start)),
      target_(std::move(target)),
      gamma_(gamma),
      fixed_c_(fixed_, nvars),
      start_c_(start_, nvars),
      target_c_(target_, nvars) {
  if (start_.size() != target_.size()) throw TrackError("start and target blocks differ in length");
  if (gamma_ == Complex(0.0)) throw TrackError("gamma must be nonzero");
  if (num_eqs() != nvars_) throw TrackError("homotopy is not square");
  target_all_ = CompiledSystem(target_rows(), nvars_);
}

Homotopy Homotopy::convex(const PolySystem& start, const PolySystem& target, Complex gamma) {
  if (start.num_vars() != target.num_vars()) throw TrackError("start/target variable mismatch");
  return Homotopy(target.num_vars(), {}, start.polys(), target.polys(), gamma);
}

void Homotopy::evaluate(const CVector& x, double t, CVector& h) const {
  h.resize(num_eqs());
  int nf = fixed_c_.size();
  for (int i = 0; i < nf; ++i) h(i) = fixed_c_.value(i, x);
  Complex a = t * gamma_;
  double b = 1.0 - t;
  for (int i = 0; i < start_c_.size(); ++i) h(nf + i) = a * start_c_.value(i, x) + b * target_c_.value(i, x);
}

void Homotopy::evaluate(const CVector& x, double t, CVector& h, CMatrix& hx, CVector& ht) const {
  int n = num_eqs();
  h.resize(n);
  ht.setZero(n);
  hx.setZero(n, nvars_);
  int nf = fixed_c_.size();
  for (int i = 0; i < nf; ++i) h(i) = fixed_c_.value_gradient(i, x, hx, i);
  if (start_c_.size() == 0) return;
  thread_local CMatrix ja, jb;
  ja.setZero(start_c_.size(), nvars_);
  jb.setZero(start_c_.size(), nvars_);
  Complex a = t * gamma_;
  double b = 1.0 - t;
  for (int i = 0; i < start_c_.size(); ++i) {
    Complex va = start_c_.value_gradient(i, x, ja, i);
    Complex vb = target_c_.value_gradient(i, x, jb, i);
    h(nf + i) = a * va + b * vb;
    ht(nf + i) = gamma_ * va - vb;
  }
  hx.bottomRows(start_c_.size()) = a * ja + b * jb;
}

std::vector<Polynomial> Homotopy::target_rows() const {
  auto rows = fixed_;
  rows.insert(rows.end(), target_.begin(), target_.end());
  return rows;
}

std::vector<Polynomial> Homotopy::start_rows() const {
  auto rows = fixed_;
  for (const auto& p : start_) rows.push_back(p.scaled(gamma_));
  return rows;
}

namespace {

// LU of diag(r) * M * diag(c), with r and c equilibrating row and column maxima.
struct ScaledLU {
  Eigen::VectorXd r, c;
  Eigen::PartialPivLU<CMatrix> lu;

  bool factor(const CMatrix& m) {
    r = m.cwiseAbs().rowwise().maxCoeff();
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = r(i) > 0.0 ? 1.0 / r(i) : 1.0;
    CMatrix s = r.asDiagonal() * m;
    c = s.cwiseAbs().colwise().maxCoeff().transpose();
    for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = c(j) > 0.0 ? 1.0 / c(j) : 1.0;
    s = s * c.asDiagonal();
    lu.compute(s);
    return lu.rcond() > 1e-15;
  }

  CVector solve(const CVector& b) const {
    CVector y = lu.solve((r.cast<Complex>().asDiagonal() * b).eval());
    return c.cast<Complex>().asDiagonal() * y;
  }
};

struct Corrector {
  const Homotopy& h;
  const TrackOptions& opts;
  CVector val, ht;
  CMatrix hx;
  ScaledLU lu;

  // Solve dx/dt = -Hx^{-1} Ht; false when Hx is numerically singular.
  bool tangent(const CVector& x, double t, CVector& dx) {
    h.evaluate(x, t, val, hx, ht);
    if (!lu.factor(hx)) return false;
    dx = -lu.solve(ht);
    return dx.allFinite();
  }

  bool correct(CVector& x, double t) {
    double prev = 0.0;
    for (int it = 0; it < opts.max_newton_iters; ++it) {
      h.evaluate(x, t, val, hx, ht);
      if (!lu.factor(hx)) return false;
      CVector d = -lu.solve(val);
      if (!d.allFinite()) return false;
      double dn = d.norm();
      x += d;
      if (dn <= opts.newton_tol * (1.0 + x.norm())) return true;
      if (it > 0 && dn > 0.5 * prev) return false;
      prev = dn;
    }
    return false;
  }
};

}  // namespace

PathResult track_path(const Homotopy& h, const CVector& start_point, const TrackOptions& opts) {
  PathResult res;
  if (start_point.size() != h.num_vars()) {
    res.diagnostic = "start point has wrong dimension";
    return res;
  }
  Corrector corr{h, opts, {}, {}, {}, {}};
  CVector x = start_point;
  if (!corr.correct(x, 1.0)) {
    // Allow a few extra sweeps for start points given to low precision.
    TrackOptions relaxed = opts;
    relaxed.max_newton_iters = 8;
    Corrector c2{h, relaxed, {}, {}, {}, {}};
    x = start_point;
    if (!c2.correct(x, 1.0)) {
      res.diagnostic = "start point does not satisfy H(x;1)";
      res.endpoint = x;
      return res;
    }
  }
  double t = 1.0;
  double step = opts.initial_step;
  int successes = 0;
  CVector k1, k2, k3, k4;
  const double start_norm = x.norm();
  while (t > 0.0) {
    if (res.steps_taken >= opts.max_steps) {
      res.status = PathStatus::Failed;
      res.diagnostic = "step budget exhausted";
      res.endpoint = x;
      return res;
    }
    double hstep = std::min(step, t);
    double tn = (hstep == t) ? 0.0 : t - hstep;
    double dt = tn - t;
    bool ok = corr.tangent(x, t, k1) && corr.tangent(x + 0.5 * dt * k1, t + 0.5 * dt, k2) &&
              corr.tangent(x + 0.5 * dt * k2, t + 0.5 * dt, k3) && corr.tangent(x + dt * k3, tn, k4);
    CVector xn;
    if (ok) {
      xn = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ok = xn.allFinite() && corr.correct(xn, tn);
    }
    if (ok) {
      x = xn;
      t = tn;
      ++res.steps_taken;
      if (x.norm() > opts.divergence_norm) {
        res.status = PathStatus::Diverged;
        res.endpoint = x;
        res.diagnostic = "norm exceeded divergence threshold";
        return res;
      }
      if (++successes >= 4) {
        step = std::min(2.0 * step, opts.max_step);
        successes = 0;
      }
    } else {
      step *= 0.5;
      successes = 0;
      if (step < opts.min_step) {
        res.endpoint = x;
        bool growing = t < 0.01 && x.norm() > std::sqrt(opts.divergence_norm) * (1.0 + start_norm);
        res.status = growing ? PathStatus::Diverged : PathStatus::Failed;
        res.diagnostic = "step size underflow at t=" + std::to_string(t);
        return res;
      }
    }
  }
  // Polish at t = 0.
  const CompiledSystem& target = h.compiled_target();
  CVector val;
  CMatrix jac;
  double last = 0.0;
  for (int it = 0; it < 6; ++it) {
    target.evaluate(x, val, jac);
    Eigen::PartialPivLU<CMatrix> lu(jac);
    if (!(lu.rcond() > 1e-15)) break;
    CVector d = -lu.solve(val);
    if (!d.allFinite()) break;
    x += d;
    last = d.norm();
    if (last <= 1e-15 * (1.0 + x.norm())) break;
  }
  target.evaluate(x, val);
  res.final_residual = val.cwiseAbs().maxCoeff();
  res.endpoint = x;
  double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  int deg = 1;
  for (const auto& p : h.target_rows()) deg = std::max(deg, p.total_degree());
  if (res.final_residual < opts.end_tol * std::pow(scale, deg) && last <= 1e-8 * (1.0 + x.norm())) {
    res.status = PathStatus::Converged;
  } else {
    res.status = PathStatus::Failed;
    res.diagnostic = "endpoint did not refine";
  }
  return res;
}

std::vector<PathResult> track_many(const Homotopy& h, const std::vector<CVector>& starts, const TrackOptions& opts) {
  std::vector<PathResult> out(starts.size());
  if (starts.empty()) return out;
  int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(starts.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) out[i] = track_path(h, starts[i], opts);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < starts.size(); i = next++) out[i] = track_path(h, starts[i], opts);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

CVector newton_refine(const PolySystem& system, const CVector& point, double tol, int max_iters) {
  if (system.size() != system.num_vars()) throw TrackError("newton_refine needs a square system");
  return newton_refine(CompiledSystem(system.polys(), system.num_vars()), point, tol, max_iters);
}

CVector newton_refine(const CompiledSystem& system, const CVector& point, double tol, int max_iters) {
  if (point.size() != system.num_vars()) throw TrackError("newton_refine: dimension mismatch");
  CVector x = point, val;
  CMatrix jac;
  double prev = -1.0;
  int slow = 0;
  for (int it = 0; it <= max_iters; ++it) {
    system.evaluate(x, val, jac);
    if (val.norm() < tol) return x;
    if (it == max_iters) break;
    auto sv = singular_values(jac);
    if (sv.empty() || sv.front() == 0.0 || sv.back() <= 1e-14 * sv.front())
      throw TrackError("singular Jacobian in newton_refine");
    Eigen::PartialPivLU<CMatrix> lu(jac);
    CVector d = -lu.solve(val);
    double dn = d.norm();
    x += d;
    if (prev > 0.0 && dn > 0.25 * prev) {
      if (++slow >= 2) throw TrackError("singular Jacobian in newton_refine (linear convergence)");
    } else {
      slow = 0;
    }
    prev = dn;
  }
  throw TrackError("newton_refine did not converge");
}

double relative_distance(const CVector& a, const CVector& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

bool same_point(const CVector& a, const CVector& b, double tol) { return relative_distance(a, b) < tol; }

}  // namespace multiwit
