#include <cmath>

#include "doctest.h"
#include "frozenperc/lemma.hpp"
#include "oracles.hpp"
#include "witness.hpp"

using namespace frozenperc;

namespace {

const ShapeParams kShape{0.25, 0.5, 0.75, 0.8, 0.05};

/// Counts of crossing configurations of `rect` by number of open edges.
std::vector<double> crossing_polynomial(const Rect& rect) {
  const Window w = Window::spanning(rect);
  const std::size_t m = w.edge_count();
  REQUIRE(m <= 20);
  std::vector<double> counts(m + 1, 0.0);
  std::vector<double> v(m);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    for (std::size_t i = 0; i < m; ++i) v[i] = (mask >> i & 1u) ? 0.25 : 0.75;
    if (has_horizontal_open_crossing(EdgeTimes::from_values(w, v), rect, 0.5)) {
      counts[static_cast<std::size_t>(std::popcount(mask))] += 1.0;
    }
  }
  return counts;
}

double eval(const std::vector<double>& counts, double t) {
  const std::size_t m = counts.size() - 1;
  double p = 0.0;
  for (std::size_t k = 0; k <= m; ++k) p += counts[k] * std::pow(t, k) * std::pow(1.0 - t, m - k);
  return p;
}

double root(const std::vector<double>& counts, double target) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eval(counts, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(LemmaParams{kShape, 64, 0.4}));
  CHECK_THROWS_AS(validate(LemmaParams{kShape, 64, 0.5}), GeometryError);
  CHECK_THROWS_AS(validate(LemmaParams{kShape, 0, 0.4}), GeometryError);
  ShapeParams wide = kShape;
  wide.eps = 0.1;
  try {
    validate(LemmaParams{wide, 64, 0.4});
    FAIL("expected rejection");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("eq2") != std::string::npos);
  }
}

TEST_CASE("single-edge crossing has probability 1/2") {
  const Estimate e = estimate_crossing(Rect{0, 1, 0, 0}, 0.5, 20000, 8);
  CHECK(std::abs(e.value - 0.5) <= 3.0 * e.std_error);
  CHECK(e.replicates == 20000);
}

TEST_CASE("small rectangles against exhaustive enumeration") {
  for (const Rect& r : {Rect{0, 3, 0, 2}, Rect{0, 2, 0, 2}, Rect{0, 3, 0, 1}}) {
    const double exact = eval(crossing_polynomial(r), 0.5);
    const Estimate e = estimate_crossing(r, 0.5, 20000, 12);
    CHECK(std::abs(e.value - exact) <= 3.0 * e.std_error);
  }
}

TEST_CASE("2:1 rectangles stay in the RSW band") {
  for (int n : {8, 16, 32}) {
    const Estimate e = estimate_crossing(Rect{0, 2 * n, 0, n}, 0.5, 400, 13);
    CHECK(e.value > 0.05);
    CHECK(e.value < 0.95);
  }
}

TEST_CASE("estimate_alpha uses R at 1/2") {
  const ProofGeometry g = build_proof_geometry(kShape, 64);
  const Estimate a = estimate_alpha(g, 300, 3);
  const Estimate b = estimate_crossing(g.r, 0.5, 300, 3);
  CHECK(a.successes == b.successes);
}

TEST_CASE("solve_tau on a single edge is the identity") {
  const Rect edge{0, 1, 0, 0};
  for (double target : {0.1, 0.25, 0.4}) {
    const TauSolution s = solve_tau(edge, target, 20000, 0.005, 21);
    CHECK(s.edge == BracketEdge::None);
    CHECK(std::abs(s.tau - target) <= 0.005 + 3.0 * std::sqrt(target * (1 - target) / 20000));
    CHECK(s.steps <= max_bisection_steps(0.005));
  }
}

TEST_CASE("solve_tau matches the exact crossing polynomial") {
  const Rect small_r{0, 2, 0, 1};        // self-dual: alpha = 1/2
  const Rect small_r_prime{0, 3, 0, 2};  // 4 x 3 vertices, 17 edges
  const Estimate alpha = estimate_crossing(small_r, 0.5, 20000, 31);
  const auto poly = crossing_polynomial(small_r_prime);
  const TauSolution s = solve_tau(small_r_prime, alpha.value / 2, 20000, 0.005, 32);
  CHECK(s.edge == BracketEdge::None);
  CHECK(std::abs(s.tau - root(poly, alpha.value / 2)) <= 0.02);
  CHECK(std::abs(s.tau - root(poly, 0.25)) <= 0.02);
  CHECK(std::abs(s.p_hat - s.target) <= 0.005 + 2.0 * s.std_error);
}

TEST_CASE("solve_tau brackets") {
  const Rect r{0, 3, 0, 2};
  const TauSolution top = solve_tau(r, 0.9, 2000, 0.01, 4);
  CHECK(top.edge == BracketEdge::Upper);
  CHECK(top.tau == 0.5);
  const TauSolution at_half = solve_tau(r, top.p_half, 2000, 0.01, 4);
  CHECK(at_half.edge == BracketEdge::Upper);
  CHECK(at_half.tau == 0.5);

  const TauSolution zero = solve_tau(r, 0.0, 2000, 0.01, 4);
  CHECK(zero.edge == BracketEdge::Lower);
  CHECK(zero.p_hat == 0.0);
  CHECK(zero.tau > 0.0);

  CHECK_THROWS_AS(solve_tau(r, -0.1, 100, 0.01, 4), std::invalid_argument);
  CHECK_THROWS_AS(solve_tau(r, 0.2, 100, 0.0, 4), std::invalid_argument);
  CHECK(max_bisection_steps(0.02) == 5);
  CHECK(max_bisection_steps(0.5) == 0);
}

TEST_CASE("common random numbers make the estimate monotone") {
  const auto thr = crossing_thresholds(Rect{0, 12, 0, 9}, 500, 77);
  CHECK(std::is_sorted(thr.begin(), thr.end()));
  double prev = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = k / 100.0;
    const double p = static_cast<double>(std::lower_bound(thr.begin(), thr.end(), t) - thr.begin()) / 500.0;
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("events on constant configurations") {
  const ProofGeometry g = build_proof_geometry(kShape, 64);
  const Window w = Window::centered(g.minimal_window_side());
  const LemmaParams p{kShape, 64, 0.4};

  const EventReport closed = check_events(EdgeTimes::from_values(w, std::vector<double>(w.edge_count(), 0.99)), p, g);
  CHECK_FALSE(closed.events[0]);
  CHECK(closed.events[1]);
  CHECK(closed.events[2]);
  CHECK_FALSE(closed.gamma);
  REQUIRE(closed.pi);
  CHECK_FALSE(closed.events[3]);  // needs gamma
  CHECK_FALSE(closed.events[4]);
  CHECK(closed.events[5]);

  const EventReport open = check_events(EdgeTimes::from_values(w, std::vector<double>(w.edge_count(), 0.01)), p, g);
  CHECK(open.events[0]);
  CHECK_FALSE(open.events[1]);
  CHECK_FALSE(open.events[2]);
  REQUIRE(open.gamma);
  // innermost circuit hugs B(cN) from outside
  for (const DoubledPoint& q : open.gamma->points) CHECK(std::max(std::abs(q.x), std::abs(q.y)) == 34);
}

TEST_CASE("check_events rejects mismatched inputs") {
  const ProofGeometry g = build_proof_geometry(kShape, 64);
  const Window w = Window::centered(g.minimal_window_side());
  const EdgeTimes t = EdgeTimes::assign(w, 1, 1);
  CHECK_THROWS_AS(check_events(t, LemmaParams{kShape, 65, 0.4}, g), GeometryError);
  CHECK_THROWS_AS(check_events(EdgeTimes::assign(Window::centered(64), 1, 1), LemmaParams{kShape, 64, 0.4}, g),
                  GeometryError);
}

TEST_CASE("hand-constructed witness") {
  const witness::Witness w = witness::build();
  const EdgeTimes t = w.times();
  const double tau = w.params.tau;

  // validate the construction edge by edge
  for (const Edge& e : w.ring_edges()) REQUIRE(is_open(t, e, tau));
  for (const Edge& e : w.inner_dual_edges()) REQUIRE(is_closed(t, e, 0.5));
  for (const Edge& e : w.shell_edges()) REQUIRE(is_closed(t, e, 0.5));
  for (const Edge& e : w.corridor_edges()) REQUIRE(is_closed(t, e, 0.5));
  for (const Edge& e : w.path_edges()) {
    REQUIRE(is_open(t, e, 0.5));
    REQUIRE(is_closed(t, e, tau));
  }
  const ProofGeometry& g = w.geometry;
  REQUIRE(w.ring_radius > g.box_c.x_max);
  REQUIRE(w.ring_radius <= g.box_b.x_max);
  REQUIRE(w.inner_dual_radius >= g.box_a.x_max);
  REQUIRE(w.inner_dual_radius + 1 <= g.box_c.x_max);
  REQUIRE(w.corridor_x >= g.l1.x_min);
  REQUIRE(w.corridor_x + 1 <= g.l1.x_max);
  REQUIRE(g.r.contains(Vertex{w.ring_radius, w.path_row}));

  const EventReport rep = check_events(t, w.params, g);
  for (int k = 0; k < 6; ++k) CHECK(rep.events[k]);
  REQUIRE(rep.gamma);
  REQUIRE(rep.pi);
  CHECK(rep.gamma->length() == 8u * static_cast<unsigned>(w.ring_radius));
  CHECK(rep.all());

  const ImplicationVerdict v = verify_implication(t, w.params, g);
  CHECK(v.pass);
  CHECK(v.lower == 16);
  CHECK(v.upper == 48);
  CHECK(v.origin.diameter >= v.lower);
  CHECK(v.origin.diameter <= v.upper);
}

TEST_CASE("planted search") {
  const ProofGeometry g = build_proof_geometry(kShape, 64);
  const LemmaParams p{kShape, 64, 0.35};
  const Window w = Window::centered(g.minimal_window_side());
  CHECK(planted_times(w, g, 0.35, 5, 3) == planted_times(w, g, 0.35, 5, 3));

  const SearchResult one = search_lemma_samples(p, g, SearchStrategy::Planted, 10, 200, 5, 1);
  const SearchResult three = search_lemma_samples(p, g, SearchStrategy::Planted, 10, 200, 5, 3);
  CHECK(one.all_true == 10);
  CHECK(one.passed == one.all_true);
  CHECK(one.attempts == three.attempts);
  CHECK(one.event_counts == three.event_counts);
  REQUIRE(one.samples.size() == three.samples.size());
  for (std::size_t i = 0; i < one.samples.size(); ++i) {
    CHECK(one.samples[i].replicate == three.samples[i].replicate);
    CHECK(one.samples[i].verdict.origin == three.samples[i].verdict.origin);
  }

  // each reported sample really satisfies every event
  for (const auto& s : one.samples) {
    const EventReport rep = check_events(planted_times(w, g, 0.35, 5, s.replicate), p, g);
    CHECK(rep.all());
  }
}
