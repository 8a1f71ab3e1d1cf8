// Acceptance suite: end-to-end checks of the solver against certified
// instances and reference computations. Each criterion prints one PASS/FAIL
// line; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hyflexa/driver.hpp"
#include "hyflexa/generator.hpp"
#include "hyflexa/generic_backend.hpp"
#include "hyflexa/oracle.hpp"
#include "support/reference_loop.hpp"
#include "support/test_problems.hpp"

using namespace hyflexa;

namespace {

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("[%s] %s  %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct A1Run {
  LassoProblem problem;
  SolveResult result;
  double seconds = 0.0;
};

// Shared configuration for the convergence criteria: Nice(4) sampling,
// threshold greedy sigma = 0.1, diminishing steps gamma0 = 1 with
// theta = 2e-4 (chosen inside the allowed range; the 1e-2 default does not
// contract far enough within the 50k-iteration budget), exact solves.
SolverConfig a1_config(int n_blocks, std::uint64_t seed, int max_iters) {
  SolverConfig cfg;
  cfg.sampling = SamplingRule::nice(n_blocks, 4);
  cfg.greedy = GreedyPolicy::threshold(0.1);
  cfg.schedule = StepSizeSchedule::diminishing(1.0, 2e-4);
  cfg.error_bound = ErrorBoundSpec::exact_distance();
  cfg.max_iters = max_iters;
  cfg.residual_tol = 0.0;
  cfg.seed = seed;
  cfg.workers = 1;
  cfg.record_trace = true;
  cfg.full_residual_every = 1000;
  cfg.check_descent = true;
  return cfg;
}

std::vector<A1Run> run_a1_instances(int max_iters) {
  std::vector<A1Run> runs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    A1Run r;
    r.problem = generate_nesterov(200, 1000, 30.0, 1.0, seed);
    LassoBackend backend(r.problem);
    const auto t0 = std::chrono::steady_clock::now();
    r.result = run(backend, a1_config(r.problem.n(), seed, max_iters), Vec::Zero(r.problem.n()));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    runs.push_back(std::move(r));
  }
  return runs;
}

// --------------------------------------------------------------------------
// A1: convergence with certificate.
// A2: full-residual diagnostic and final stationarity.
// A6: per-iteration descent inequality; monotone V once gamma < 0.05. The
//     runs extend past 50k iterations so that gamma crosses 0.05 and the
//     monotonicity clause is exercised on a nonempty tail.
// --------------------------------------------------------------------------
void criteria_a1_a2_a6() {
  const int kA1Horizon = 50000;
  const int kExtendedHorizon = 130000;  // gamma < 0.05 from k ~ 95000 on
  std::vector<A1Run> runs;
  try {
    runs = run_a1_instances(kExtendedHorizon);
  } catch (const std::exception& e) {
    report("A1", false, std::string("solver threw: ") + e.what());
    report("A2", false, "skipped: A1 runs unavailable");
    report("A6", false, "skipped: A1 runs unavailable");
    return;
  }

  // A1: re(x) <= 1e-6 within 50,000 iterations; <= 60 s per instance.
  {
    double worst_re = 0.0, worst_s = 0.0;
    for (const auto& r : runs) {
      const double re = relative_error(r.problem, r.result.trace[kA1Horizon].objective);
      worst_re = std::max(worst_re, re);
      worst_s = std::max(worst_s, r.seconds);
    }
    std::ostringstream d;
    d << "worst re@50k=" << worst_re << ", worst time=" << worst_s << "s (horizon "
      << kExtendedHorizon << ")";
    report("A1", worst_re <= 1e-6 && worst_s <= 60.0, d.str());
  }

  // A2: min recorded full residual <= 1e-6; final iterate coordinate-wise
  // stationary at 1e-5.
  {
    double worst_min_fr = 0.0, worst_violation = 0.0;
    for (const auto& r : runs) {
      double min_fr = r.result.min_full_residual;
      for (std::size_t k = 0; k <= static_cast<std::size_t>(kA1Horizon); ++k) {
        if (r.result.trace[k].full_residual)
          min_fr = std::min(min_fr, *r.result.trace[k].full_residual);
      }
      worst_min_fr = std::max(worst_min_fr, min_fr);
      const auto rep = oracle::check_lasso_stationarity(r.problem, r.result.final_x, 1e-5);
      worst_violation = std::max(worst_violation, rep.max_violation);
    }
    std::ostringstream d;
    d << "worst min ||xhat-x||=" << worst_min_fr << ", worst stationarity violation="
      << worst_violation;
    report("A2", worst_min_fr <= 1e-6 && worst_violation <= 1e-5, d.str());
  }

  // A6: descent inequality with slack 1e-8 at every iteration; V(x^k)
  // nonincreasing (1e-10 relative) on the gamma < 0.05 tail.
  {
    double worst_descent = -1e300;
    long long checked = 0, violations = 0;
    for (const auto& r : runs) {
      worst_descent = std::max(worst_descent, r.result.max_descent_violation);
      const auto& tr = r.result.trace;
      for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
        if (tr[k].gamma < 0.05) {
          ++checked;
          if (tr[k + 1].objective > tr[k].objective * (1.0 + 1e-10)) ++violations;
        }
      }
    }
    std::ostringstream d;
    d << "max descent violation=" << worst_descent << ", monotone tail rows checked=" << checked
      << ", violations=" << violations;
    report("A6", worst_descent <= 1e-8 && checked > 0 && violations == 0, d.str());
  }
}

// --------------------------------------------------------------------------
// A3: closed-form scalar solves against the grid brute-force oracle.
// --------------------------------------------------------------------------
void criterion_a3() {
  // The two worked examples first.
  Vec b2(2);
  b2 << 1.0, 0.0;
  SpMat ident(2, 2);
  ident.setIdentity();
  LassoProblem ex(ident, b2, 0.5);
  ResidualCache cache;
  cache.reset(ex, Vec::Zero(2));
  const double ex_tau0 = lasso_best_response(ex, 0, Vec::Zero(2), cache, 0.0);
  const double ex_tau2 = lasso_best_response(ex, 0, Vec::Zero(2), cache, 2.0);
  bool pass = std::abs(ex_tau0 - 0.75) <= 1e-12 && std::abs(ex_tau2 - 0.375) <= 1e-12;

  // 1000 random scalar subproblems: minimize a (z-h)^2 + tau/2 (z-xk)^2 + c|z|.
  SplitMix64 rng(20260810);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double a = 0.2 + 2.0 * rng.next_double();
    const double h = 1.5 * (2.0 * rng.next_double() - 1.0);
    const double tau = 0.01 + rng.next_double();
    const double c = 0.05 + rng.next_double();
    const double xk = 0.5 * (2.0 * rng.next_double() - 1.0);

    const double q = 2.0 * a + tau;
    const double closed = soft_threshold((2.0 * a * h + tau * xk) / q, c / q);
    const double grid = oracle::scalar_bruteforce_min(
        [&](double z) {
          return a * (z - h) * (z - h) + 0.5 * tau * (z - xk) * (z - xk) + c * std::abs(z);
        },
        -2.5, 2.5, 1e-5);
    worst = std::max(worst, std::abs(closed - grid));
  }
  pass = pass && worst <= 1e-5;
  std::ostringstream d;
  d << "worked examples ok, worst |closed-grid|=" << worst << " over 1000 draws";
  report("A3", pass, d.str());
}

// --------------------------------------------------------------------------
// A4: sampler laws at N = 20 plus doubly-uniform symmetry for N <= 8.
// --------------------------------------------------------------------------
void criterion_a4() {
  const int n = 20;
  const int draws = 100000;
  bool pass = true;
  std::ostringstream d;

  const std::vector<std::pair<std::string, SamplingRule>> rules = {
      {"uniform", SamplingRule::uniform(n, 5.0)},
      {"du", SamplingRule::doubly_uniform(n, std::vector<double>(n, 1.0 / n))},
      {"nu", SamplingRule::nonoverlapping_contiguous(n, 4)},
      {"nice", SamplingRule::nice(n, 3)},
      {"sequential", SamplingRule::sequential(n)},
      {"full", SamplingRule::fully_parallel(n)},
  };
  for (const auto& [name, rule] : rules) {
    SplitMix64 rng(2024);
    std::vector<double> freq(n, 0.0);
    for (int t = 0; t < draws; ++t)
      for (int i : draw(rule, rng)) freq[static_cast<std::size_t>(i)] += 1.0;
    double worst_sds = 0.0;
    for (int i = 0; i < n; ++i) {
      const double pi = inclusion_probability(rule, i);
      const double sd = std::sqrt(std::max(pi * (1.0 - pi), 0.0) / draws);
      const double dev = std::abs(freq[static_cast<std::size_t>(i)] / draws - pi);
      worst_sds = std::max(worst_sds, sd > 0.0 ? dev / sd : (dev > 0.0 ? 1e9 : 0.0));
    }
    if (worst_sds > 4.0) {
      pass = false;
      d << name << " deviates by " << worst_sds << " sd; ";
    }
  }

  // Equal-cardinality symmetry by exhaustive subset enumeration at N = 6.
  {
    const int ns = 6;
    const std::vector<double> pmf = {0.25, 0.15, 0.3, 0.1, 0.1, 0.1};
    auto rule = SamplingRule::doubly_uniform(ns, pmf);
    SplitMix64 rng(31337);
    const int draws2 = 200000;
    std::vector<int> hist(1 << ns, 0);
    for (int t = 0; t < draws2; ++t) {
      int mask = 0;
      for (int i : draw(rule, rng)) mask |= 1 << i;
      hist[static_cast<std::size_t>(mask)]++;
    }
    auto binom = [](int nn, int kk) {
      long long r = 1;
      for (int t = 1; t <= kk; ++t) r = r * (nn - kk + t) / t;
      return static_cast<double>(r);
    };
    for (int mask = 1; mask < (1 << ns); ++mask) {
      const int size = __builtin_popcount(static_cast<unsigned>(mask));
      const double p_set = pmf[static_cast<std::size_t>(size - 1)] / binom(ns, size);
      const double sd = std::sqrt(std::max(p_set * (1.0 - p_set), 0.0) / draws2);
      const double freq = static_cast<double>(hist[static_cast<std::size_t>(mask)]) / draws2;
      if (std::abs(freq - p_set) > 4.0 * sd + 1e-12) {
        pass = false;
        d << "du subset " << mask << " off; ";
      }
    }
  }

  if (pass) d << "all six rules within 4 binomial sd over " << draws << " draws";
  report("A4", pass, d.str());
}

// --------------------------------------------------------------------------
// A5: diminishing step law.
// --------------------------------------------------------------------------
void criterion_a5() {
  bool pass = true;
  std::ostringstream d;
  for (double theta : {1e-2, 2e-4, 0.5}) {
    double gamma = 1.0;
    double prev = 2.0;
    bool monotone = true;
    const long long horizon = 100000;
    for (long long k = 0; k < horizon; ++k) {
      if (!(gamma > 0.0 && gamma < prev)) monotone = false;
      prev = gamma;
      gamma = step_size_next(gamma, theta);
    }
    const double law = std::abs(gamma * theta * static_cast<double>(horizon) - 1.0);
    if (!monotone || law > 0.1) pass = false;
    d << "theta=" << theta << ": |gamma*theta*k-1|=" << law << "; ";
  }
  report("A5", pass, d.str());
}

// --------------------------------------------------------------------------
// A7: determinism across worker counts.
// --------------------------------------------------------------------------
void criterion_a7() {
  const auto t0 = std::chrono::steady_clock::now();
  auto problem = generate_nesterov(100, 400, 30.0, 2.0, 5);

  SolverConfig cfg;
  cfg.sampling = SamplingRule::nice(problem.n(), 16);
  cfg.greedy = GreedyPolicy::threshold(0.1);
  cfg.schedule = StepSizeSchedule::diminishing(1.0, 1e-3);
  cfg.error_bound = ErrorBoundSpec::exact_distance();
  cfg.max_iters = 2000;
  cfg.residual_tol = 0.0;
  cfg.seed = 42;
  cfg.record_trace = true;
  cfg.full_residual_every = 250;

  std::vector<SolveResult> results;
  for (int workers : {1, 2, 8}) {
    SolverConfig c = cfg;
    c.workers = workers;
    LassoBackend backend(problem);
    results.push_back(run(backend, c, Vec::Zero(problem.n())));
  }

  bool pass = true;
  for (std::size_t w = 1; w < results.size() && pass; ++w) {
    if (results[w].trace.size() != results[0].trace.size()) pass = false;
    for (std::size_t k = 0; pass && k < results[0].trace.size(); ++k) {
      const auto& a = results[0].trace[k];
      const auto& b = results[w].trace[k];
      if (a.objective != b.objective || a.residual != b.residual || a.gamma != b.gamma ||
          a.sampled != b.sampled || a.updated != b.updated ||
          a.full_residual != b.full_residual)
        pass = false;
    }
    for (int i = 0; pass && i < problem.n(); ++i)
      if (results[w].final_x[i] != results[0].final_x[i]) pass = false;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << "workers {1,2,8} bit-identical over 2000 iterations, " << secs << "s";
  report("A7", pass && secs <= 5.0, d.str());
}

// --------------------------------------------------------------------------
// A8: reduction to known baselines.
// --------------------------------------------------------------------------
void criterion_a8() {
  bool pass = true;
  std::ostringstream d;

  // Bit-exact match with the straight-line full-update reference loop
  // (gamma0 damped so the all-blocks Jacobi update stays stable).
  {
    auto problem = generate_nesterov(40, 120, 40.0, 4.0, 17);
    const auto tau = default_lasso_tau(problem);
    LassoBackend backend(problem, tau);
    SolverConfig cfg;
    cfg.sampling = SamplingRule::fully_parallel(problem.n());
    cfg.greedy = GreedyPolicy::threshold(0.0);
    cfg.schedule = StepSizeSchedule::diminishing(0.05, 1e-3);
    cfg.error_bound = ErrorBoundSpec::exact_distance();
    cfg.max_iters = 100;
    cfg.residual_tol = 0.0;
    cfg.seed = 3;
    cfg.record_trace = true;
    auto res = run(backend, cfg, Vec::Zero(problem.n()));
    auto ref = testsupport::reference_full_update(problem, tau, 0.05, 1e-3, 100);
    bool bitexact = res.trace.size() == 100;
    bool finite = true;
    for (std::size_t k = 0; bitexact && k < 100; ++k) {
      finite = finite && std::isfinite(res.trace[k].objective);
      bitexact = res.trace[k].objective == ref.rows[k].objective &&
                 res.trace[k].residual == ref.rows[k].residual &&
                 res.trace[k].gamma == ref.rows[k].gamma &&
                 res.trace[k].sampled == problem.n() && res.trace[k].updated == problem.n();
    }
    for (int i = 0; bitexact && i < problem.n(); ++i) bitexact = res.final_x[i] == ref.x[i];
    if (!bitexact || !finite) pass = false;
    d << (bitexact && finite ? "reference loop bit-exact over 100 iterations; "
                             : "reference mismatch; ");
  }

  // Final objective agreement with the reference proximal-gradient solver.
  {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto problem = generate_nesterov(30, 60, 50.0, 5.0, 700 + seed);
      LassoBackend backend(problem);
      SolverConfig cfg;
      cfg.sampling = SamplingRule::nice(problem.n(), problem.n() / 4);
      cfg.greedy = GreedyPolicy::threshold(0.1);
      cfg.schedule = StepSizeSchedule::diminishing(1.0, 1e-4);
      cfg.error_bound = ErrorBoundSpec::exact_distance();
      cfg.max_iters = 30000;
      cfg.residual_tol = 0.0;
      cfg.seed = seed;
      cfg.record_trace = false;
      auto res = run(backend, cfg, Vec::Zero(problem.n()));

      const double lip = oracle::estimate_gradient_lipschitz(problem);
      auto ista = oracle::reference_prox_gradient(problem, 100000, 1.0 / (lip * 1.02));
      worst = std::max(worst,
                       std::abs(res.final_objective - ista.objective) /
                           (1.0 + std::abs(ista.objective)));
    }
    if (worst > 1e-7) pass = false;
    d << "worst |V_driver - V_ista| (rel) = " << worst << " over 10 instances";
  }

  report("A8", pass, d.str());
}

// --------------------------------------------------------------------------
// A9: surrogate contract (F1/F2) for all three kinds on 100 random anchors.
// --------------------------------------------------------------------------
void criterion_a9() {
  auto f = testsupport::QuadraticFixture::random(9, 63);
  auto p = testsupport::make_quadratic_problem(f, {3, 3, 3});
  const Eigen::MatrixXd Q = f.Q;
  auto hess = [Q, &p](int i, const Vec&) {
    const int off = p.partition.offset(i);
    const int ni = p.partition.size(i);
    return Eigen::MatrixXd(Q.block(off, off, ni, ni));
  };
  const std::vector<std::pair<std::string, SurrogateKind>> kinds = {
      {"proximal-linear", SurrogateKind::proximal_linear_uniform(0.8, 3)},
      {"regularized-newton", SurrogateKind::regularized_newton(0.05, hess)},
      {"exact-block", SurrogateKind::exact_block(0.3)},
  };

  bool pass = true;
  std::ostringstream d;
  SplitMix64 rng(64);
  for (const auto& [name, kind] : kinds) {
    double worst_f2 = 0.0, worst_f1 = 0.0;
    for (int t = 0; t < 100; ++t) {
      Vec x(9);
      for (int j = 0; j < 9; ++j) x[j] = 2.0 * rng.next_double() - 1.0;
      const int i = static_cast<int>(rng.next_below(3));
      auto s = build_surrogate(kind, p, i, x);

      // F2 via the finite-difference oracle on F.
      Vec fd(3);
      const int off = p.partition.offset(i);
      for (int j = 0; j < 3; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(x[off + j]));
        Vec xp = x, xm = x;
        xp[off + j] += h;
        xm[off + j] -= h;
        fd[j] = (p.smooth_eval(xp) - p.smooth_eval(xm)) / (2.0 * h);
      }
      const Vec ga = s.grad_eval(s.anchor_block);
      worst_f2 = std::max(worst_f2, (ga - fd).norm() / (1.0 + fd.norm()));

      // F1 on 10 random pairs per anchor.
      for (int pair = 0; pair < 10; ++pair) {
        Vec u(3), v(3);
        for (int j = 0; j < 3; ++j) {
          u[j] = 2.0 * rng.next_double() - 1.0;
          v[j] = 2.0 * rng.next_double() - 1.0;
        }
        const double lhs = (s.grad_eval(u) - s.grad_eval(v)).dot(u - v);
        const double slack = lhs - s.strong_convexity * (u - v).squaredNorm();
        worst_f1 = std::min(worst_f1, slack);
      }
    }
    if (worst_f2 > 1e-5 || worst_f1 < -1e-10) {
      pass = false;
      d << name << " violated (f2=" << worst_f2 << ", f1 slack=" << worst_f1 << "); ";
    } else {
      d << name << " ok; ";
    }
  }
  report("A9", pass, d.str());
}

// --------------------------------------------------------------------------
// A10: the hybrid scheme needs fewer iterations than the pure random one.
// --------------------------------------------------------------------------
void criterion_a10() {
  const int cap = 3000;
  auto iterations_to_target = [&](const LassoProblem& p, double sigma) {
    SolverConfig cfg;
    cfg.sampling = SamplingRule::nice(p.n(), p.n() / 2);
    cfg.greedy = GreedyPolicy::threshold(sigma);
    cfg.schedule = StepSizeSchedule::diminishing(1.0, 1e-3);
    cfg.error_bound = ErrorBoundSpec::exact_distance();
    cfg.max_iters = cap;
    cfg.residual_tol = 0.0;
    cfg.seed = 99;
    cfg.workers = 2;
    cfg.record_trace = true;
    LassoBackend backend(p);
    auto res = run(backend, cfg, Vec::Zero(p.n()));
    const double vstar = p.known_optimum->v_star;
    for (const auto& row : res.trace) {
      if ((row.objective - vstar) / vstar <= 1e-4) return row.k;
    }
    return cap + 1;  // did not reach the target within the cap
  };

  std::vector<int> hybrid, pure;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = generate_nesterov(500, 5000, 10.0, 0.5, 100 + seed);
    hybrid.push_back(iterations_to_target(p, 0.1));
    pure.push_back(iterations_to_target(p, 0.0));
  }
  std::sort(hybrid.begin(), hybrid.end());
  std::sort(pure.begin(), pure.end());
  const double med_hybrid = 0.5 * (hybrid[4] + hybrid[5]);
  const double med_pure = 0.5 * (pure[4] + pure[5]);
  std::ostringstream d;
  d << "median iterations to re<=1e-4: hybrid(sigma=0.1)=" << med_hybrid
    << ", pure(sigma=0)=" << med_pure << " (cap " << cap << ")";
  report("A10", med_hybrid < med_pure, d.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criteria_a1_a2_a6();
  criterion_a3();
  criterion_a4();
  criterion_a5();
  criterion_a7();
  criterion_a8();
  criterion_a9();
  criterion_a10();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d criteria failed (total %.1fs)\n", g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
