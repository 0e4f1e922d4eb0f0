#include "frozenperc/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "frozenperc/clocks.hpp"
#include "frozenperc/parallel.hpp"

namespace frozenperc {

void validate(const Plan& plan) {
  if (plan.n.empty()) throw std::invalid_argument("n: at least one freezing diameter required");
  if (plan.replicates < 1) throw std::invalid_argument("replicates: must be >= 1");
  if (plan.multiplier < 2) throw std::invalid_argument("multiplier: must be >= 2");
  if (!(plan.a > 0.0 && plan.a < plan.b)) throw std::invalid_argument("a, b: need 0 < a < b");
  if (plan.window_side && (*plan.window_side < 2 || *plan.window_side % 2 != 0)) {
    throw std::invalid_argument("window: side must be a positive even integer");
  }
  for (const FreezeThreshold& n : plan.n) {
    if (n.is_unbounded() && !plan.window_side) {
      throw std::invalid_argument("window: the unbounded threshold needs an explicit window side");
    }
    if (!n.is_unbounded() && !plan.window_side && n.value() > (1 << 15) / plan.multiplier) {
      throw std::invalid_argument("n: window multiplier * N too large");
    }
  }
}

int window_side_for(const Plan& plan, FreezeThreshold n) {
  if (plan.window_side) return *plan.window_side;
  return plan.multiplier * n.value();
}

std::uint64_t stream_seed(std::uint64_t master_seed, FreezeThreshold n) {
  return substream(master_seed, n.is_unbounded() ? 0 : static_cast<std::uint64_t>(n.value()));
}

Proportion wilson(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson: zero trials");
  if (successes > trials) throw std::invalid_argument("wilson: successes exceed trials");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (ph + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  p.value = ph;
  p.lo = successes == 0 ? 0.0 : std::min(ph, std::max(0.0, centre - half));
  p.hi = successes == trials ? 1.0 : std::max(ph, std::min(1.0, centre + half));
  return p;
}

std::vector<OriginStats> simulate_origins(const Window& window, FreezeThreshold n, std::uint64_t seed,
                                          std::size_t count, unsigned threads) {
  std::vector<OriginStats> out(count);
  std::vector<Engine> engines(effective_threads(threads, count));
  parallel_for(count, threads, [&](std::size_t i, unsigned worker) {
    out[i] = engines[worker].run_origin(EdgeTimes::assign(window, seed, i), n);
  });
  return out;
}

namespace {

struct Tally {
  std::size_t trials = 0, interval = 0, giant = 0, max = 0;

  void add(const OriginStats& o, FreezeThreshold n, double a, double b) {
    ++trials;
    if (n.is_unbounded()) return;
    const double d = o.diameter;
    const int big_n = n.value();
    interval += (d > a * big_n && d < b * big_n) ? 1 : 0;
    giant += o.diameter >= big_n ? 1 : 0;
    max += o.diameter == 2 * big_n - 1 ? 1 : 0;
  }
};

bool touches_boundary(const OriginStats& o, FreezeThreshold n) {
  return n.is_unbounded() || o.boundary_margin < n.value();
}

}  // namespace

SweepRow summarize(const std::vector<OriginStats>& origins, FreezeThreshold n, int window, double a, double b,
                   BoundaryPolicy policy) {
  if (origins.empty()) throw std::invalid_argument("summarize: no replicates");
  Tally all, kept;
  SweepRow row;
  row.n = n;
  row.window = window;
  row.replicates = origins.size();
  row.policy = policy;
  for (const OriginStats& o : origins) {
    all.add(o, n, a, b);
    if (touches_boundary(o, n)) {
      ++row.excluded_boundary;
    } else {
      kept.add(o, n, a, b);
    }
  }
  const auto fill = [](const Tally& t, Proportion& i, Proportion& g, Proportion& m) {
    if (t.trials == 0) {
      i = g = m = Proportion{};
      return;
    }
    i = wilson(t.interval, t.trials);
    g = wilson(t.giant, t.trials);
    m = wilson(t.max, t.trials);
  };
  fill(policy == BoundaryPolicy::Exclude ? kept : all, row.interval, row.giant, row.max);
  if (policy == BoundaryPolicy::Both) {
    Proportion i, g, m;
    fill(kept, i, g, m);
    row.interval_excluded = i;
    row.giant_excluded = g;
    row.max_excluded = m;
  }
  return row;
}

namespace {

SweepRow run_one(const Plan& plan, FreezeThreshold n, unsigned threads) {
  const int side = window_side_for(plan, n);
  const auto origins =
      simulate_origins(Window::centered(side), n, stream_seed(plan.master_seed, n), plan.replicates, threads);
  return summarize(origins, n, side, plan.a, plan.b, plan.policy);
}

}  // namespace

SweepRow run_replicates(const Plan& plan, unsigned threads) {
  validate(plan);
  return run_one(plan, plan.n.front(), threads);
}

std::vector<SweepRow> sweep(const Plan& plan, unsigned threads) {
  validate(plan);
  std::vector<SweepRow> rows;
  rows.reserve(plan.n.size());
  for (const FreezeThreshold& n : plan.n) rows.push_back(run_one(plan, n, threads));
  return rows;
}

Histogram diameter_histogram(const Plan& plan, unsigned threads, int bins) {
  validate(plan);
  if (bins < 1) throw std::invalid_argument("bins: must be >= 1");
  const FreezeThreshold n = plan.n.front();
  if (n.is_unbounded()) throw std::invalid_argument("n: histogram of diameter / N needs a finite N");
  const int side = window_side_for(plan, n);
  const auto origins =
      simulate_origins(Window::centered(side), n, stream_seed(plan.master_seed, n), plan.replicates, threads);

  Histogram h;
  h.n = n;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const int big_n = n.value();
  std::size_t total = 0;
  for (const OriginStats& o : origins) {
    if (o.diameter >= 2 * big_n) {
      throw std::logic_error("diameter " + std::to_string(o.diameter) + " reaches 2N at N=" + std::to_string(big_n));
    }
    if (touches_boundary(o, n)) {
      ++h.excluded_boundary;
      if (plan.policy == BoundaryPolicy::Exclude) continue;
    }
    // exact integer binning of diameter / N into width 2 / bins
    const auto k = static_cast<std::size_t>((static_cast<long long>(o.diameter) * bins) / (2LL * big_n));
    ++h.counts[k];
    ++total;
  }
  h.mass.assign(h.counts.size(), 0.0);
  if (total > 0) {
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      h.mass[k] = static_cast<double>(h.counts[k]) / static_cast<double>(total);
    }
  }
  return h;
}

}  // namespace frozenperc
