#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frozenperc/clocks.hpp"
#include "frozenperc/connectivity.hpp"
#include "frozenperc/engine.hpp"
#include "frozenperc/lattice.hpp"

namespace frozenperc {

struct LemmaParams {
  ShapeParams shape;
  int n = 0;
  double tau = 0.0;
};

/// Throws GeometryError unless the shape is valid, n >= 1 and 0 < tau < 1/2.
void validate(const LemmaParams& p);

/// Monte Carlo proportion with its binomial standard error.
struct Estimate {
  std::size_t replicates = 0;
  std::size_t successes = 0;
  double value = 0.0;
  double std_error = 0.0;
};
Estimate make_estimate(std::size_t successes, std::size_t replicates);

/// Horizontal t-open crossing probability of `rect`. Replicate i uses the
/// clocks of stream (seed, i) on the window spanning `rect`.
Estimate estimate_crossing(const Rect& rect, double t, std::size_t replicates, std::uint64_t seed,
                           unsigned threads = 1);

/// Crossing probability of R at t = 1/2.
Estimate estimate_alpha(const ProofGeometry& geometry, std::size_t replicates, std::uint64_t seed,
                        unsigned threads = 1);

/// Per-replicate crossing thresholds of `rect`, sorted ascending. The
/// empirical crossing probability at t is the fraction below t.
std::vector<double> crossing_thresholds(const Rect& rect, std::size_t replicates, std::uint64_t seed,
                                        unsigned threads = 1);

enum class BracketEdge : std::uint8_t { None, Lower, Upper };

struct TauSolution {
  double tau = 0.0;
  double target = 0.0;
  double p_hat = 0.0;        // empirical crossing probability at tau
  double std_error = 0.0;    // binomial SE of p_hat
  double p_half = 0.0;       // empirical crossing probability at 1/2
  int steps = 0;             // bisection steps taken
  BracketEdge edge = BracketEdge::None;
  std::string note;
};

/// Solves P(t-open horizontal crossing of `rect`) = target for t in (0, 1/2)
/// by bisection on common random numbers, stopping once the bracket is
/// narrower than `tolerance`; the answer is then the point of the final
/// bracket whose empirical probability is closest to the target.
/// target >= P(1/2) returns 1/2 flagged Upper; target == 0 returns the
/// largest t with no observed crossing, flagged Lower. Throws
/// std::invalid_argument for a target outside [0, 1] or tolerance <= 0.
TauSolution solve_tau(const Rect& rect, double target, std::size_t replicates, double tolerance,
                      std::uint64_t seed, unsigned threads = 1);
/// Same on R' of the geometry.
TauSolution solve_tau(const ProofGeometry& geometry, double target, std::size_t replicates, double tolerance,
                      std::uint64_t seed, unsigned threads = 1);

/// Largest number of bisection steps solve_tau may take.
int max_bisection_steps(double tolerance);

struct EventReport {
  std::array<bool, 6> events{};  // (i) .. (vi)
  std::optional<Circuit> gamma;  // innermost tau-open circuit around B(cN)
  std::optional<Circuit> pi;     // outermost 1/2-closed dual circuit around Lambda
  double alpha_hat = 0.0;
  double tau_hat = 0.0;

  bool all() const;
};

/// Evaluates the six events on one clock configuration. The window of
/// `times` must contain lambda' with a one-vertex margin. Throws
/// GeometryError if geometry and params disagree and std::logic_error if
/// an extracted circuit fails its own defining property.
EventReport check_events(const EdgeTimes& times, const LemmaParams& params, const ProofGeometry& geometry);

struct ImplicationVerdict {
  bool pass = false;
  int lower = 0;  // |B(aN)| side
  int upper = 0;  // |B(bN)| side
  OriginStats origin;
  std::string message;
};

/// Runs the frozen dynamics with freezing diameter N on the same clocks and
/// checks that the origin's final diameter lies in [lower, upper].
ImplicationVerdict verify_implication(const EdgeTimes& times, const LemmaParams& params,
                                      const ProofGeometry& geometry);

/// Configuration generators for the seed search.
enum class SearchStrategy : std::uint8_t {
  Uniform,  // plain i.i.d. clocks
  Planted,  // i.i.d. clocks with randomly placed structures favouring the events
};

/// i.i.d. clocks of stream (seed, replicate) with, at random positions, a
/// tau-open square ring between B(cN) and B(bN), 1/2-closed dual rings in
/// B(cN) minus B(aN) and around Lambda, 1/2-closed dual corridors in L1 and
/// L2 from the ring outwards, and a 1/2-open but tau-closed straight path
/// in R from its east side to the ring.
EdgeTimes planted_times(const Window& window, const ProofGeometry& geometry, double tau, std::uint64_t seed,
                        std::uint64_t replicate);

struct SearchSample {
  std::uint64_t replicate = 0;
  ImplicationVerdict verdict;
};

struct SearchResult {
  std::size_t attempts = 0;
  std::array<std::size_t, 6> event_counts{};
  std::size_t all_true = 0;
  std::size_t passed = 0;
  std::vector<SearchSample> samples;  // every all-true configuration, in replicate order
};

/// Tries replicates 0, 1, ... until `wanted` all-true configurations are
/// found or `max_attempts` is reached. The result depends only on the
/// arguments, not on the thread count.
SearchResult search_lemma_samples(const LemmaParams& params, const ProofGeometry& geometry, SearchStrategy strategy,
                                  std::size_t wanted, std::size_t max_attempts, std::uint64_t seed,
                                  unsigned threads = 1);

}  // namespace frozenperc
