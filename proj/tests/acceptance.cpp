// One pass/fail line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cqr/cli.hpp"
#include "cqr/extract.hpp"
#include "cqr/linalg.hpp"
#include "cqr/oracle.hpp"
#include "cqr/random.hpp"
#include "examples.hpp"

using namespace cqr;

namespace {

class Ctx {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream o;
    o << checks_ - failed_ << "/" << checks_ << " checks";
    if (!notes_.empty()) o << "; " << notes_;
    for (const auto& f : failures_) o << "\n    failed: " << f;
    if (failed_ > failures_.size()) o << "\n    ... " << failed_ - failures_.size() << " more";
    return o.str();
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

extract::PipelineResult run(const CqrProblem& p, double tol_gap = 1e-9,
                            sdp::Mode mode = sdp::Mode::dense) {
  extract::PipelineConfig cfg;
  cfg.ipm.tol_gap = tol_gap;
  cfg.ipm.mode = mode;
  return extract::solve(p, cfg);
}

void criterion_1(Ctx& c) {
  const CqrProblem p = examples::quartic_single_min();
  const auto r = run(p);
  const auto& t = r.extraction.report;
  const double mu = oracle::solve_1d(p).mu_star;
  c.expect(near(t.gamma_star, -1.0, 1e-6), fmt("gamma* = %.12g", t.gamma_star));
  c.expect(near(mu, 0.0, 1e-9), fmt("oracle mu* = %.3e", mu));
  c.expect(!t.tight, "verdict should be not tight");
  c.expect(t.condition_value && near(*t.condition_value, -12.0, 1e-6),
           fmt("condition value %.12g", t.condition_value.value_or(NAN)));
  c.note(fmt("gamma* %.10g, condition %.10g", t.gamma_star, t.condition_value.value_or(NAN)));
}

void criterion_2(Ctx& c) {
  const CqrProblem p = examples::quartic_two_mins();
  const auto r = run(p);
  const auto& t = r.extraction.report;
  const oracle::OracleResult o = oracle::solve_1d(p);
  c.expect(near(t.gamma_star, -5.0, 1e-5), fmt("gamma* = %.12g", t.gamma_star));
  c.expect(o.minimizers.size() == 2, fmt("oracle found %g minimizers", double(o.minimizers.size())));
  if (o.minimizers.size() == 2) {
    double a = o.minimizers[0][0], b = o.minimizers[1][0];
    if (a > b) std::swap(a, b);
    c.expect(near(a, 1.0, 1e-6) && near(b, 2.0, 1e-6), fmt("oracle minimizers %.9g, %.9g", a, b));
  }
  // Distinct nonzero minimizer norms rule out tightness.
  c.expect(o.radii.size() == 2, "two distinct optimal radii");
  c.expect(!t.tight, "verdict should be not tight");
  c.expect(r.extraction.set.empty(), "extracted set should be empty");
}

void criterion_3(Ctx& c) {
  const CqrProblem p = examples::zero_and_sphere(2);
  const auto r = run(p);
  const auto& s = r.extraction.set;
  c.expect(r.extraction.report.tight, "verdict should be tight");
  c.expect(s.contains_zero, "0 belongs to the set");
  c.expect(s.z_star && near(*s.z_star, 2.0, 1e-6), fmt("z* = %.12g", s.z_star.value_or(NAN)));
  c.expect(s.particular && norm2(*s.particular) < 1e-6, "sphere centered at 0");
  c.expect(near(s.radius, 2.0, 1e-6) && s.nullspace_dim() == 2,
           fmt("radius %.9g, nullspace dim %g", s.radius, double(s.nullspace_dim())));
  c.expect(near(r.extraction.report.gamma_star, 0.0, 1e-7),
           fmt("gamma* = %.3e", r.extraction.report.gamma_star));
}

void criterion_4(Ctx& c) {
  const CqrProblem p = examples::alternating_ten();
  const auto r = run(p);
  const auto& e = r.extraction;
  c.expect(near(e.report.gamma_star, -1.0, 1e-6), fmt("gamma* = %.12g", e.report.gamma_star));
  c.expect(near(e.report.theta_star, -1.0, 1e-6), fmt("theta* = %.12g", e.report.theta_star));
  c.expect(e.set.z_star && near(*e.set.z_star, 1.0, 1e-4), fmt("z* = %.9g", e.set.z_star.value_or(NAN)));
  c.expect(e.certificate.rank_x0 == 9, fmt("rank R = %g", double(e.certificate.rank_x0)));
  c.expect(!e.set.contains_zero, "0 is not a minimizer");
  // Exactly two members: a one-dimensional nullspace, positive radius.
  c.expect(e.set.nullspace_dim() == 1 && e.set.radius > 1e-3,
           fmt("nullspace dim %g radius %.3g", double(e.set.nullspace_dim()), e.set.radius));
  if (e.set.particular && e.set.nullspace_dim() == 1) {
    Vector alt(10);
    for (std::size_t i = 0; i < 10; ++i) alt[i] = (i % 2 == 0 ? -1.0 : 1.0) / std::sqrt(10.0);
    const Vector n1 = e.set.basis.col(0);
    for (double sign : {1.0, -1.0}) {
      Vector m = *e.set.particular;
      axpy(sign * e.set.radius, n1, m);
      const double d_plus = max_abs(m - alt);
      const double d_minus = max_abs(m + alt);
      c.expect(std::min(d_plus, d_minus) <= 1e-4, fmt("member off by %.3e", std::min(d_plus, d_minus)));
    }
  }
}

void criterion_5(Ctx& c) {
  const CqrProblem p = examples::sphere_family();
  const auto r = run(p);
  const auto& e = r.extraction;
  c.expect(near(e.report.mu_upper, -5.2479, 1e-3), fmt("mu* = %.9g", e.report.mu_upper));
  c.expect(e.set.z_star && near(*e.set.z_star, 1.6559, 1e-3), fmt("z* = %.9g", e.set.z_star.value_or(NAN)));
  c.expect(e.set.nullspace_dim() == 4, fmt("nullspace dim %g", double(e.set.nullspace_dim())));
  c.expect(e.report.err_abs <= 1e-6, fmt("err_abs %.3e", e.report.err_abs));
  if (e.set.particular) {
    // Distance from the point to the sphere slice.
    const Vector x{1.1709, -1.1709, 0, 0, 0};
    const Vector d = x - *e.set.particular;
    const Vector coef = transpose_times(e.set.basis, d);
    Vector proj = *e.set.particular;
    const double nc = norm2(coef);
    for (std::size_t j = 0; j < coef.size(); ++j)
      for (std::size_t i = 0; i < 5; ++i) proj[i] += e.set.radius * coef[j] / nc * e.set.basis(i, j);
    c.expect(norm2(x - proj) <= 1e-3, fmt("distance of the listed point to the set %.3e", norm2(x - proj)));
  } else {
    c.expect(false, "no sphere extracted");
  }
  c.note(fmt("mu* %.8g, z* %.6g, err_abs %.2e", e.report.mu_upper, e.set.z_star.value_or(NAN), e.report.err_abs));
}

void point_criterion(Ctx& c, const CqrProblem& p, const Vector& expect, double mu, bool rank_one,
                     std::optional<double> z) {
  const auto r = run(p);
  const auto& e = r.extraction;
  if (rank_one) c.expect(e.report.reason == extract::Reason::rank_one, "rank-one recovery path");
  c.expect(e.report.tight, "verdict should be tight");
  c.expect(e.set.particular.has_value() && e.set.nullspace_dim() == 0, "single minimizer");
  if (e.set.particular)
    for (std::size_t i = 0; i < expect.size(); ++i)
      c.expect(near((*e.set.particular)[i], expect[i], 1e-3),
               fmt("s*[%g] = %.6g", double(i), (*e.set.particular)[i]));
  c.expect(near(e.report.mu_upper, mu, 1e-2), fmt("mu* = %.10g", e.report.mu_upper));
  if (rank_one) c.expect(e.report.err_rel <= 1e-6, fmt("err_rel %.3e", e.report.err_rel));
  if (z) c.expect(e.set.z_star && near(*e.set.z_star, *z, 1e-3), fmt("z* = %.8g", e.set.z_star.value_or(NAN)));
  c.note(fmt("mu* %.10g, err_rel %.2e", e.report.mu_upper, e.report.err_rel));
}

void criterion_6(Ctx& c) {
  point_criterion(c, examples::rank_one_three(), {-1.8131, 3.6458, -6.5873}, -1281.5926, true,
                  std::nullopt);
}

void criterion_7(Ctx& c) {
  point_criterion(c, examples::rank_one_five(), {-2.8277, -1.4802, -0.7917, -2.5252, -0.9839},
                  -144.8805, false, 4.2612);
}

void criterion_8(Ctx& c) {
  const double betas[] = {10, 1, 0, -1, -10, -100};
  std::size_t tight = 0, loose = 0;
  for (std::size_t n : {2, 3})
    for (std::size_t b = 0; b < 6; ++b)
      for (std::size_t k = 0; k < 20; ++k) {
        const CqrProblem p = cli::random_problem(CounterRng::derive(8, n, b, k), n, betas[b]);
        // The 1e-6 absolute target at |mu*| ~ 1e4 needs a relative gap below 1e-10.
        const auto r = run(p, 1e-12);
        const auto& t = r.extraction.report;
        const oracle::OracleResult o = oracle::solve_1d(p);
        const std::string id = fmt("n=%g beta=%g k=%g", double(n), betas[b], double(k));
        if (t.tight) {
          ++tight;
          c.expect(near(t.gamma_star, o.mu_star, 1e-6),
                   id + fmt(": |gamma* - mu*| = %.3e", std::abs(t.gamma_star - o.mu_star)));
        } else {
          ++loose;
          c.expect(t.gamma_star <= o.mu_star - 1e-8, id + ": gamma* not below mu*");
          const double cond = o.r_star * (p.beta() + 3.0 * p.sigma() * o.r_star);
          c.expect(cond < -1e-7, id + fmt(": condition %.3e holds", cond));
        }
      }
  c.note(fmt("%g tight, %g not tight", double(tight), double(loose)));
}

void criterion_9(Ctx& c) {
  std::size_t count = 0;
  for (std::size_t n : {5, 20})
    for (std::size_t k = 0; k < 100; ++k) {
      CqrProblem p = cli::random_problem(CounterRng::derive(9, n, k), n, 0.0);
      if (k < 50) {
        p = CqrProblem(0, p.g(), p.H(), 0.5 * double(k % 25), 4);  // beta >= 0
      } else {
        Matrix h = p.H();
        const double shift = linalg::min_psd_eig(h) + 0.05 * double(k % 4);  // 0 included
        for (std::size_t i = 0; i < n; ++i) h(i, i) -= shift;
        p = CqrProblem(0, p.g(), h, -2.0 * double(k % 25) - 1.0, 4);
      }
      const std::string id = fmt("n=%g k=%g", double(n), double(k));
      try {
        const auto r = run(p);
        ++count;
        c.expect(r.extraction.report.tight, id + ": not tight");
        const auto members = r.extraction.set.sample(10, CounterRng::derive(90, n, k));
        c.expect(!members.empty(), id + ": no members");
        for (const Vector& s : members) {
          const oracle::GlobalCheck g = oracle::verify_global(p, s);
          c.expect(g.stationary && g.psd, id + fmt(": stationarity %.3e, min eig %.3e", g.stationarity, g.min_eig));
        }
      } catch (const std::exception& e) {
        c.expect(false, id + ": " + e.what());
      }
    }
  c.note(fmt("%g instances", double(count)));
}

void criterion_10(Ctx& c) {
  // Solves for weak duality, the certificate and set invariants.
  const double betas[] = {10, 0, -10, -100};
  for (std::size_t n : {2, 4, 8})
    for (std::size_t b = 0; b < 4; ++b) {
      const CqrProblem p = cli::random_problem(CounterRng::derive(10, n, b), n, betas[b]);
      const auto r = run(p);
      const auto& e = r.extraction;
      const std::string id = fmt("n=%g beta=%g", double(n), betas[b]);
      CounterRng rng(CounterRng::derive(11, n, b));
      for (int k = 0; k < 100; ++k) {
        const Vector s = rng.normal_vector(n);
        const double m = evaluate(p, s);
        c.expect(e.report.gamma_star <= m + 1e-9 * (1 + std::abs(m)), id + ": weak duality");
        if (k < 20)
          c.expect(std::abs(m - e.certificate.gamma - e.certificate.value(s)) <= 1e-6 * (1 + std::abs(m)),
                   id + ": certificate identity");
      }
      if (e.set.z_star)
        for (const Vector& s : e.set.sample(20, 3)) {
          const double r2 = norm2(s);
          if (r2 > 0)
            c.expect(std::abs(r2 - *e.set.z_star) <= 1e-8 * *e.set.z_star, id + ": same-norm invariant");
        }
    }
  // Finite differences and the expansion identity.
  for (std::size_t k = 0; k < 10; ++k) {
    const std::size_t n = 2 + k % 4;
    const CqrProblem p = cli::random_problem(CounterRng::derive(12, k), n, -5.0 + k);
    CounterRng rng(CounterRng::derive(13, k));
    const Vector s = rng.normal_vector(n);
    const Vector grad = gradient(p, s);
    const Matrix hes = hessian(p, s);
    const double h = 1e-5;
    for (std::size_t i = 0; i < n; ++i) {
      Vector a = s, b = s;
      a[i] += h;
      b[i] -= h;
      const double fd = (evaluate(p, a) - evaluate(p, b)) / (2 * h);
      c.expect(std::abs(fd - grad[i]) <= 1e-5 * (1 + std::abs(grad[i])), "gradient finite difference");
      const Vector ga = gradient(p, a), gb = gradient(p, b);
      for (std::size_t j = 0; j < n; ++j) {
        const double fh = (ga[j] - gb[j]) / (2 * h);
        c.expect(std::abs(fh - hes(i, j)) <= 1e-5 * (1 + std::abs(hes(i, j))), "Hessian finite difference");
      }
    }
    const oracle::OracleResult o = oracle::solve_1d(p);
    const Vector& xs = o.minimizers.front();
    const double rs = norm2(xs);
    const Matrix bs = b_matrix(p, rs);
    Vector res = bs * xs;
    axpy(1.0, p.g(), res);
    for (int t = 0; t < 30; ++t) {
      const Vector y = 3.0 * rng.normal_vector(n);
      const Vector w = y - xs;
      const double ry = norm2(y);
      const double f2 = 0.5 * (ry - rs) * (ry - rs) *
                        ((p.beta() + 3 * p.sigma() * rs) / 6.0 * (rs + 2 * ry) + 0.5 * p.sigma() * ry * ry);
      const double rhs = dot(res, w) + 0.5 * dot(w, bs * w) + f2;
      const double lhs = evaluate(p, y) - evaluate(p, xs);
      c.expect(std::abs(lhs - rhs) <= 1e-8 * (1 + std::abs(lhs)), fmt("expansion identity off by %.3e", lhs - rhs));
    }
  }
  // Dense and eigen modes.
  double worst = 0;
  for (std::size_t k = 0; k < 20; ++k) {
    const CqrProblem p = cli::random_problem(CounterRng::derive(14, k), 100, 10.0 - 5.0 * double(k % 6));
    extract::PipelineConfig cfg;
    const double a = sdp::ipm_solve(sdp::assemble(p), cfg.ipm).dual.gamma;
    cfg.ipm.mode = sdp::Mode::eigen;
    const double b = sdp::ipm_solve(sdp::assemble(p), cfg.ipm).dual.gamma;
    const double diff = std::abs(a - b) / (1 + std::abs(a));
    worst = std::max(worst, diff);
    c.expect(diff <= 1e-7, fmt("modes differ by %.3e (relative)", diff));
  }
  c.note(fmt("worst dense/eigen relative difference %.2e", worst));
}

void criterion_11(Ctx& c) {
  using clock = std::chrono::steady_clock;
  {
    const CqrProblem p = cli::random_problem(CounterRng::derive(15, 200), 200, -1.0);
    const auto t0 = clock::now();
    const auto s = sdp::ipm_solve(sdp::assemble(p));
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    c.expect(s.stats.status == sdp::Status::converged, "n = 200 converged");
    c.expect(secs < 30.0, fmt("n = 200 took %.2f s", secs));
    c.note(fmt("n=200 dense %.2f s", secs));
  }
  {
    const CqrProblem p = cli::random_problem(CounterRng::derive(15, 500), 500, -1.0);
    sdp::IpmConfig cfg;
    cfg.mode = sdp::Mode::eigen;
    const auto t0 = clock::now();
    const auto s = sdp::ipm_solve(sdp::assemble(p), cfg);
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    c.expect(s.stats.status == sdp::Status::converged, "n = 500 converged");
    c.expect(secs < 300.0, fmt("n = 500 took %.2f s", secs));
    c.note(fmt("n=500 eigen %.2f s", secs));
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // 0 = no runtime budget
  std::function<void(Ctx&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "single minimizer, not tight", 1.0, criterion_1},
      {2, "two minimizer norms, not tight", 1.0, criterion_2},
      {3, "zero plus radius-two sphere", 0.0, criterion_3},
      {4, "alternating n = 10, two minimizers", 2.0, criterion_4},
      {5, "3-sphere of minimizers", 2.0, criterion_5},
      {6, "rank-one recovery, n = 3", 1.0, criterion_6},
      {7, "unique minimizer, n = 5", 1.0, criterion_7},
      {8, "random sweep against the 1-D oracle", 60.0, criterion_8},
      {9, "guaranteed-tight suite", 0.0, criterion_9},
      {10, "property suite", 0.0, criterion_10},
      {11, "performance budget", 0.0, criterion_11},
  };
  int failed = 0;
  for (const Criterion& cr : all) {
    Ctx ctx;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(ctx);
    } catch (const std::exception& e) {
      ctx.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_seconds > 0)
      ctx.expect(secs < cr.budget_seconds, fmt("runtime %.2f s over budget %.0f s", secs, cr.budget_seconds));
    if (!ctx.ok()) ++failed;
    std::printf("criterion %2d %s  %-40s %7.2f s  %s\n", cr.id, ctx.ok() ? "PASS" : "FAIL", cr.title,
                secs, ctx.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
