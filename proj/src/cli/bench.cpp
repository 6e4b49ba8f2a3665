#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "cqr/cli.hpp"
#include "cqr/random.hpp"

namespace cqr::cli {
namespace {

struct Outcome {
  double seconds = 0.0;
  double err_abs = 0.0;
  double oracle_err = 0.0;
  bool oracle_used = false;
  bool tight = false;
  bool failed = false;
};

Outcome run_instance(const CqrProblem& p, const extract::PipelineConfig& cfg,
                     std::uint64_t sample_key) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const extract::PipelineResult r = extract::solve(p, cfg);
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const extract::TightnessReport& t = r.extraction.report;
    o.tight = t.tight;
    o.err_abs = t.err_abs;
    if (p.n() <= kOracleLimit) {
      o.oracle_used = true;
      const double mu = oracle::solve_1d(p).mu_star;
      // Non-tight instances only have to respect the bound.
      o.oracle_err = t.tight ? std::abs(t.gamma_star - mu) : std::max(0.0, t.gamma_star - mu);
    } else {
      CounterRng rng(sample_key);
      for (int k = 0; k < 100; ++k) {
        const Vector s = rng.normal_vector(p.n());
        o.oracle_err = std::max(o.oracle_err, t.gamma_star - evaluate(p, s));
      }
    }
  } catch (const std::exception&) {
    o.failed = true;
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return o;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  struct Job {
    std::size_t cell, i, j, k;
  };
  if (cfg.instances == 0) return {};
  std::vector<Job> jobs;
  const std::size_t nb = cfg.betas.size();
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < cfg.instances; ++k) jobs.push_back({i * nb + j, i, j, k});

  std::vector<Outcome> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx; (idx = next.fetch_add(1)) < jobs.size();) {
      const Job& jb = jobs[idx];
      const CqrProblem p = random_problem(CounterRng::derive(cfg.seed, jb.i, jb.j, jb.k),
                                          cfg.sizes[jb.i], cfg.betas[jb.j]);
      results[idx] =
          run_instance(p, cfg.pipeline, CounterRng::derive(cfg.seed ^ 0x5a5a5a5aULL, jb.i, jb.j, jb.k));
    }
  };
  const std::size_t nt = std::max<std::size_t>(1, std::min(cfg.threads, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<BenchRow> rows(cfg.sizes.size() * nb);
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      rows[i * nb + j].n = cfg.sizes[i];
      rows[i * nb + j].beta = cfg.betas[j];
    }
  for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
    BenchRow& r = rows[jobs[idx].cell];
    const Outcome& o = results[idx];
    ++r.instances;
    r.mean_seconds += o.seconds;
    if (o.failed) {
      ++r.failures;
      continue;
    }
    (o.tight ? r.tight : r.not_tight) += 1;
    r.max_err_abs = std::max(r.max_err_abs, o.err_abs);
    r.max_oracle_err = std::max(r.max_oracle_err, o.oracle_err);
    r.oracle_used = o.oracle_used;
  }
  for (BenchRow& r : rows)
    if (r.instances > 0) r.mean_seconds /= double(r.instances);
  return rows;
}

}  // namespace cqr::cli
