#include "frozenperc/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "frozenperc/parallel.hpp"

namespace frozenperc {
namespace {

bool same_shape(const ShapeParams& a, const ShapeParams& b) {
  return a.a == b.a && a.c == b.c && a.b == b.b && a.l == b.l && a.eps == b.eps;
}

double fraction_below(const std::vector<double>& sorted, double t) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

bool contains_all(const Region& region, const std::vector<Vertex>& vs) {
  for (const Vertex& v : vs) {
    if (!region.contains(v)) return false;
  }
  return true;
}

/// Uniform draws for the planted search; independent of the clock stream.
class Draws {
 public:
  Draws(std::uint64_t seed, std::uint64_t replicate) : gen_(substream(substream(seed, replicate), 0x706c616e74ULL)) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  /// Strictly inside (lo, hi).
  double between(double lo, double hi) { return lo + (hi - lo) * (0.001 + 0.998 * unit()); }
  int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

void validate(const LemmaParams& p) {
  const auto violations = validate_params(p.shape);
  if (!violations.empty()) {
    std::string names;
    for (const auto& v : violations) names += (names.empty() ? "" : ", ") + v.name;
    throw GeometryError("parameter inequalities violated: " + names);
  }
  if (p.n < 1) throw GeometryError("N must be at least 1");
  if (!(p.tau > 0.0 && p.tau < 0.5)) throw GeometryError("tau must lie in (0, 1/2)");
}

Estimate make_estimate(std::size_t successes, std::size_t replicates) {
  Estimate e;
  e.replicates = replicates;
  e.successes = successes;
  if (replicates == 0) return e;
  e.value = static_cast<double>(successes) / static_cast<double>(replicates);
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(replicates));
  return e;
}

std::vector<double> crossing_thresholds(const Rect& rect, std::size_t replicates, std::uint64_t seed,
                                        unsigned threads) {
  if (replicates == 0) throw std::invalid_argument("replicates must be at least 1");
  const Window w = Window::spanning(rect);
  std::vector<double> out(replicates);
  parallel_for(replicates, threads, [&](std::size_t i, unsigned) {
    out[i] = crossing_threshold(EdgeTimes::assign(w, seed, i), rect);
  });
  std::sort(out.begin(), out.end());
  return out;
}

Estimate estimate_crossing(const Rect& rect, double t, std::size_t replicates, std::uint64_t seed,
                           unsigned threads) {
  const auto thresholds = crossing_thresholds(rect, replicates, seed, threads);
  const auto hits = static_cast<std::size_t>(std::lower_bound(thresholds.begin(), thresholds.end(), t) -
                                             thresholds.begin());
  return make_estimate(hits, replicates);
}

Estimate estimate_alpha(const ProofGeometry& geometry, std::size_t replicates, std::uint64_t seed,
                        unsigned threads) {
  return estimate_crossing(geometry.r, 0.5, replicates, seed, threads);
}

int max_bisection_steps(double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return std::max(0, static_cast<int>(std::ceil(std::log2(0.5 / tolerance))));
}

TauSolution solve_tau(const Rect& rect, double target, std::size_t replicates, double tolerance,
                      std::uint64_t seed, unsigned threads) {
  if (!(target >= 0.0 && target <= 1.0)) throw std::invalid_argument("target must lie in [0, 1]");
  const int step_limit = max_bisection_steps(tolerance);
  const auto thr = crossing_thresholds(rect, replicates, seed, threads);

  TauSolution s;
  s.target = target;
  s.p_half = fraction_below(thr, 0.5);
  const auto finish = [&](double tau) {
    s.tau = tau;
    s.p_hat = fraction_below(thr, tau);
    s.std_error = std::sqrt(s.p_hat * (1.0 - s.p_hat) / static_cast<double>(thr.size()));
    return s;
  };

  if (target >= s.p_half) {
    s.edge = BracketEdge::Upper;
    s.note = "target is not below the crossing probability at 1/2";
    return finish(0.5);
  }

  // Invariant: P(lo) <= target < P(hi).
  double lo = 0.0;
  double hi = 0.5;
  while (hi - lo > tolerance && s.steps < step_limit) {
    const double mid = 0.5 * (lo + hi);
    ++s.steps;
    if (fraction_below(thr, mid) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // The empirical curve is a step function; inside the final bracket pick
  // the constant piece closest to the target and return its midpoint.
  std::vector<double> cuts{lo};
  for (auto it = std::upper_bound(thr.begin(), thr.end(), lo); it != thr.end() && *it < hi; ++it) {
    if (*it > cuts.back()) cuts.push_back(*it);
  }
  cuts.push_back(hi);
  double best_mid = 0.5 * (lo + hi);
  double best_gap = 2.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    const double gap = std::abs(fraction_below(thr, mid) - target);
    if (gap < best_gap) {
      best_gap = gap;
      best_mid = mid;
    }
  }
  if (target == 0.0) {
    s.edge = BracketEdge::Lower;
    s.note = "target is zero; returning the largest t without an observed crossing";
  }
  return finish(best_mid);
}

TauSolution solve_tau(const ProofGeometry& geometry, double target, std::size_t replicates, double tolerance,
                      std::uint64_t seed, unsigned threads) {
  return solve_tau(geometry.r_prime, target, replicates, tolerance, seed, threads);
}

bool EventReport::all() const {
  return std::all_of(events.begin(), events.end(), [](bool e) { return e; });
}

EventReport check_events(const EdgeTimes& times, const LemmaParams& params, const ProofGeometry& g) {
  validate(params);
  if (params.n != g.n || !same_shape(params.shape, g.params)) {
    throw GeometryError("geometry was built for different parameters");
  }
  const Rect need = g.lambda_prime.domain().expanded(1);
  if (!times.window().bounds().contains(need)) throw GeometryError("clock window does not contain lambda'");

  EventReport rep;
  rep.tau_hat = params.tau;
  const double tau = params.tau;

  rep.gamma = innermost_open_circuit(times, Annulus::make(g.box_c, g.box_b), tau);
  rep.events[0] = rep.gamma.has_value();
  if (rep.gamma) {
    for (const Edge& e : rep.gamma->edges()) {
      if (!is_open(times, e, tau)) throw std::logic_error("innermost circuit has an edge that is not tau-open");
    }
    const Region in = interior_of(*rep.gamma);
    if (!contains_all(in, Region::from_rect(g.box_c).vertices())) {
      throw std::logic_error("innermost circuit does not surround B(cN)");
    }
  }

  rep.events[1] = has_closed_dual_circuit(times, Annulus::make(g.box_a, g.box_c), 0.5);

  rep.pi = outermost_closed_dual_circuit(times, Annulus::make(g.lambda, g.lambda_prime), 0.5);
  rep.events[2] = rep.pi.has_value();
  std::optional<Region> pi_interior;
  if (rep.pi) {
    for (const Edge& e : rep.pi->edges()) {
      if (is_open(times, e, 0.5)) throw std::logic_error("outermost dual circuit crosses a 1/2-open edge");
    }
    pi_interior = interior_of(*rep.pi);
    if (!contains_all(*pi_interior, g.lambda.vertices())) {
      throw std::logic_error("outermost dual circuit does not surround lambda");
    }
  }

  if (rep.gamma && rep.pi) {
    rep.events[3] = has_closed_dual_path_connecting(times, g.l1, *rep.gamma, *rep.pi, 0.5) &&
                    has_closed_dual_path_connecting(times, g.l2, *rep.gamma, *rep.pi, 0.5);
  }

  if (rep.gamma) {
    std::vector<Vertex> east;
    for (int y = g.r.y_min; y <= g.r.y_max; ++y) east.push_back({g.r.x_max, y});
    const auto gv = rep.gamma->vertices();
    rep.events[4] = has_open_path(times, Region::from_rect(g.r), east, Region::from_vertices(gv), 0.5);
  }

  if (pi_interior) {
    const Rect& rp = g.r_prime;
    std::vector<std::uint8_t> mask(rp.vertex_count(), 0);
    std::size_t i = 0;
    for (int y = rp.y_min; y <= rp.y_max; ++y) {
      for (int x = rp.x_min; x <= rp.x_max; ++x, ++i) mask[i] = pi_interior->contains({x, y}) ? 1 : 0;
    }
    const Region region = Region::from_mask(rp, std::move(mask));
    rep.events[5] = !has_horizontal_open_crossing(times, region, rp.x_min, rp.x_max, tau);
  }
  return rep;
}

ImplicationVerdict verify_implication(const EdgeTimes& times, const LemmaParams& params, const ProofGeometry& g) {
  validate(params);
  ImplicationVerdict v;
  v.lower = g.box_a.width();
  v.upper = g.box_b.width();
  Engine engine;
  v.origin = engine.run_origin(times, FreezeThreshold(params.n));
  v.pass = v.origin.diameter >= v.lower && v.origin.diameter <= v.upper;
  std::ostringstream os;
  os << "origin diameter " << v.origin.diameter << (v.pass ? " in " : " outside ") << '[' << v.lower << ", "
     << v.upper << "], frozen=" << (v.origin.frozen ? "yes" : "no") << ", size=" << v.origin.size;
  v.message = os.str();
  return v;
}

EdgeTimes planted_times(const Window& window, const ProofGeometry& g, double tau, std::uint64_t seed,
                        std::uint64_t replicate) {
  const EdgeTimes base = EdgeTimes::assign(window, seed, replicate);
  std::vector<double> v(base.values().begin(), base.values().end());
  Draws draw(seed, replicate);
  const auto set = [&](const Edge& e, double lo, double hi) { v[window.edge_index(e)] = draw.between(lo, hi); };

  const int kc = g.box_c.x_max;
  const int kb = g.box_b.x_max;

  // tau-open square ring at radius r
  const int r = draw.integer(kc + 1, kb);
  for (int k = -r; k < r; ++k) {
    set({{k, -r}, Axis::Horizontal}, 0.0, tau);
    set({{k, r}, Axis::Horizontal}, 0.0, tau);
    set({{-r, k}, Axis::Vertical}, 0.0, tau);
    set({{r, k}, Axis::Vertical}, 0.0, tau);
  }

  // 1/2-closed dual ring between radii rho and rho + 1 inside B(cN)
  const int rho = draw.integer(g.box_a.x_max, kc - 1);
  for (int k = -rho; k <= rho; ++k) {
    set({{rho, k}, Axis::Horizontal}, 0.5, 1.0);
    set({{-rho - 1, k}, Axis::Horizontal}, 0.5, 1.0);
    set({{k, rho}, Axis::Vertical}, 0.5, 1.0);
    set({{k, -rho - 1}, Axis::Vertical}, 0.5, 1.0);
  }

  // 1/2-closed dual ring around the k-neighbourhood of lambda
  const Region shell = chebyshev_neighborhood(g.lambda, draw.integer(0, g.margin - 1));
  for (const Vertex& p : shell.vertices()) {
    if (!shell.contains({p.x + 1, p.y})) set({p, Axis::Horizontal}, 0.5, 1.0);
    if (!shell.contains({p.x - 1, p.y})) set({{p.x - 1, p.y}, Axis::Horizontal}, 0.5, 1.0);
    if (!shell.contains({p.x, p.y + 1})) set({p, Axis::Vertical}, 0.5, 1.0);
    if (!shell.contains({p.x, p.y - 1})) set({{p.x, p.y - 1}, Axis::Vertical}, 0.5, 1.0);
  }

  // dual corridors from the ring to the outer boundary of lambda'
  const int fx1 = draw.integer(g.l1.x_min, g.l1.x_max - 1);
  for (int y = r + 1; y <= g.l1.y_max - 1; ++y) set({{fx1, y}, Axis::Horizontal}, 0.5, 1.0);
  const int fx2 = draw.integer(g.l2.x_min, g.l2.x_max - 1);
  for (int y = -r - 1; y >= g.l2.y_min + 1; --y) set({{fx2, y}, Axis::Horizontal}, 0.5, 1.0);

  // 1/2-open, tau-closed path along R from its east side to the ring
  const int y0 = draw.integer(g.r.y_min, g.r.y_max);
  for (int x = r; x < g.r.x_max; ++x) set({{x, y0}, Axis::Horizontal}, tau, 0.5);

  return EdgeTimes::from_values(window, std::move(v), base.seed());
}

SearchResult search_lemma_samples(const LemmaParams& params, const ProofGeometry& g, SearchStrategy strategy,
                                  std::size_t wanted, std::size_t max_attempts, std::uint64_t seed,
                                  unsigned threads) {
  validate(params);
  const Window window = Window::centered(g.minimal_window_side());
  struct Outcome {
    std::array<bool, 6> events{};
    std::optional<ImplicationVerdict> verdict;
  };
  SearchResult res;
  const std::size_t batch = 32;
  std::vector<Outcome> outcomes;
  for (std::size_t start = 0; start < max_attempts && res.all_true < wanted; start += batch) {
    const std::size_t count = std::min(batch, max_attempts - start);
    outcomes.assign(count, Outcome{});
    parallel_for(count, threads, [&](std::size_t i, unsigned) {
      const std::uint64_t rep = start + i;
      const EdgeTimes times = strategy == SearchStrategy::Planted ? planted_times(window, g, params.tau, seed, rep)
                                                                  : EdgeTimes::assign(window, seed, rep);
      const EventReport report = check_events(times, params, g);
      outcomes[i].events = report.events;
      if (report.all()) outcomes[i].verdict = verify_implication(times, params, g);
    });
    for (std::size_t i = 0; i < count && res.all_true < wanted; ++i) {
      ++res.attempts;
      for (int k = 0; k < 6; ++k) res.event_counts[k] += outcomes[i].events[k] ? 1 : 0;
      if (outcomes[i].verdict) {
        ++res.all_true;
        if (outcomes[i].verdict->pass) ++res.passed;
        res.samples.push_back({start + i, *outcomes[i].verdict});
      }
    }
  }
  return res;
}

}  // namespace frozenperc
