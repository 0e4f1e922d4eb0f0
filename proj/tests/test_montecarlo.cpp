#include <numeric>

#include "doctest.h"
#include "frozenperc/clocks.hpp"
#include "frozenperc/montecarlo.hpp"

using namespace frozenperc;

TEST_CASE("Wilson intervals against reference values") {
  struct Ref {
    std::size_t k, n;
    double lo, hi;
  };
  // reference: statsmodels proportion_confint(method="wilson", alpha=0.05)
  for (const Ref& r : {Ref{0, 10, 0.0, 0.277532799862889}, Ref{3, 10, 0.107791267406301, 0.603221852538855},
                       Ref{10, 10, 0.722467200137111, 1.0}, Ref{57, 2000, 0.0220625160545291, 0.0367452595316924},
                       Ref{1, 1, 0.206549314377237, 1.0}}) {
    const Proportion p = wilson(r.k, r.n);
    CHECK(p.lo == doctest::Approx(r.lo).epsilon(1e-12));
    CHECK(p.hi == doctest::Approx(r.hi).epsilon(1e-12));
    CHECK(p.lo <= p.value);
    CHECK(p.value <= p.hi);
  }
  CHECK_THROWS_AS(wilson(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson(3, 2), std::invalid_argument);
}

TEST_CASE("plan validation names the field") {
  const auto message = [](const Plan& p) {
    try {
      validate(p);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  Plan p;
  CHECK(message(p).empty());
  p.replicates = 0;
  CHECK(message(p).starts_with("replicates"));
  p = Plan{};
  p.multiplier = 1;
  CHECK(message(p).starts_with("multiplier"));
  p = Plan{};
  p.a = 0.8;
  CHECK(message(p).starts_with("a, b"));
  p = Plan{};
  p.a = 0.0;
  CHECK(message(p).starts_with("a, b"));
  p = Plan{};
  p.n = {FreezeThreshold::unbounded()};
  CHECK(message(p).starts_with("window"));
  p.window_side = 7;
  CHECK(message(p).starts_with("window"));
  p.window_side = 8;
  CHECK(message(p).empty());
}

TEST_CASE("stream seeds are disjoint per N") {
  CHECK(stream_seed(42, FreezeThreshold(32)) == substream(42, 32));
  CHECK(stream_seed(42, FreezeThreshold::unbounded()) == substream(42, 0));
  CHECK(stream_seed(42, FreezeThreshold(32)) != stream_seed(42, FreezeThreshold(64)));
}

TEST_CASE("summaries on hand-made origins") {
  // N = 10, a = 0.25, b = 0.75: interval is diam in {3..7}
  const FreezeThreshold n(10);
  std::vector<OriginStats> o = {
      {2, false, 3, 40}, {3, false, 4, 40}, {7, false, 8, 5}, {8, false, 9, 40}, {10, true, 11, 40}, {19, true, 20, 2},
  };
  const SweepRow both = summarize(o, n, 80, 0.25, 0.75, BoundaryPolicy::Both);
  CHECK(both.replicates == 6);
  CHECK(both.interval.successes == 2);
  CHECK(both.giant.successes == 2);
  CHECK(both.max.successes == 1);
  CHECK(both.excluded_boundary == 2);
  REQUIRE(both.interval_excluded);
  CHECK(both.interval_excluded->trials == 4);
  CHECK(both.interval_excluded->successes == 1);
  CHECK(both.giant_excluded->successes == 1);
  CHECK(both.max_excluded->successes == 0);

  const SweepRow excl = summarize(o, n, 80, 0.25, 0.75, BoundaryPolicy::Exclude);
  CHECK(excl.interval == *both.interval_excluded);
  CHECK_FALSE(excl.interval_excluded);
  const SweepRow incl = summarize(o, n, 80, 0.25, 0.75, BoundaryPolicy::Include);
  CHECK(incl.interval == both.interval);
  CHECK_FALSE(incl.giant_excluded);

  // the endpoints aN and bN themselves are outside the open interval
  const SweepRow edges = summarize({{4, false, 5, 99}, {12, false, 13, 99}}, FreezeThreshold(16), 128, 0.25, 0.75,
                                   BoundaryPolicy::Include);
  CHECK(edges.interval.successes == 0);
}

TEST_CASE("interval beyond the cap is never hit") {
  Plan p;
  p.n = {FreezeThreshold(8)};
  p.replicates = 300;
  p.a = 2.0;
  p.b = 3.0;
  p.master_seed = 1;
  const SweepRow row = run_replicates(p);
  CHECK(row.interval.successes == 0);
  CHECK(row.interval.value == 0.0);
}

TEST_CASE("unbounded threshold") {
  Plan p;
  p.n = {FreezeThreshold::unbounded()};
  p.window_side = 16;
  p.replicates = 50;
  const SweepRow row = run_replicates(p);
  CHECK(row.giant.value == 0.0);
  CHECK(row.window == 16);
  for (const OriginStats& o : simulate_origins(Window::centered(16), FreezeThreshold::unbounded(), 3, 50)) {
    CHECK(o.diameter == 16);
    CHECK_FALSE(o.frozen);
  }
  CHECK_THROWS_AS(diameter_histogram(p), std::invalid_argument);
}

TEST_CASE("giant and sub-giant partition the replicates") {
  Plan p;
  p.n = {FreezeThreshold(6), FreezeThreshold(10)};
  p.replicates = 400;
  p.master_seed = 9;
  const auto rows = sweep(p);
  REQUIRE(rows.size() == 2);
  for (const SweepRow& row : rows) {
    const int n = row.n.value();
    const auto origins =
        simulate_origins(Window::centered(row.window), row.n, stream_seed(p.master_seed, row.n), p.replicates);
    const auto small = static_cast<std::size_t>(
        std::count_if(origins.begin(), origins.end(), [&](const OriginStats& o) { return o.diameter < n; }));
    CHECK(row.giant.successes + small == row.replicates);
    CHECK(row.window == 8 * n);
  }
}

TEST_CASE("doubling replicates shrinks intervals by about 1/sqrt 2") {
  Plan p;
  p.n = {FreezeThreshold(8)};
  p.replicates = 2000;
  p.master_seed = 5;
  const SweepRow one = run_replicates(p);
  p.replicates = 4000;
  const SweepRow two = run_replicates(p);
  const double ratio = (two.interval.hi - two.interval.lo) / (one.interval.hi - one.interval.lo);
  CHECK(ratio >= 0.6);
  CHECK(ratio <= 0.85);
}

TEST_CASE("results do not depend on the worker count") {
  Plan p;
  p.n = {FreezeThreshold(8), FreezeThreshold(12)};
  p.replicates = 200;
  p.master_seed = 77;
  const auto serial = sweep(p, 1);
  CHECK(sweep(p, 3) == serial);
  CHECK(sweep(p, 8) == serial);
  const Histogram h1 = diameter_histogram(p, 1);
  const Histogram h4 = diameter_histogram(p, 4);
  CHECK(h1.counts == h4.counts);
}

TEST_CASE("diameter histogram") {
  Plan p;
  p.n = {FreezeThreshold(12)};
  p.replicates = 500;
  p.master_seed = 4;
  const Histogram h = diameter_histogram(p);
  REQUIRE(h.counts.size() == 40);
  CHECK(h.bin_width() == doctest::Approx(0.05));
  CHECK(std::accumulate(h.mass.begin(), h.mass.end(), 0.0) == doctest::Approx(1.0));
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == 500);
  // (2N - 1) / N = 23 / 12 lands in bin 38
  for (std::size_t k = 39; k < h.counts.size(); ++k) CHECK(h.counts[k] == 0);

  p.n = {FreezeThreshold(1)};
  const Histogram one = diameter_histogram(p);
  for (std::size_t k = 0; k < one.counts.size(); ++k) {
    if (k != 0 && k != 20) CHECK(one.counts[k] == 0);
  }
  CHECK(one.counts[0] + one.counts[20] == 500);

  p.policy = BoundaryPolicy::Exclude;
  p.n = {FreezeThreshold(12)};
  const Histogram ex = diameter_histogram(p);
  CHECK(std::accumulate(ex.counts.begin(), ex.counts.end(), std::size_t{0}) + ex.excluded_boundary == 500);
}
