#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frozenperc/engine.hpp"
#include "frozenperc/lattice.hpp"

namespace frozenperc {

enum class BoundaryPolicy : std::uint8_t {
  Include,  // every replicate counts
  Exclude,  // drop replicates whose origin cluster comes within N of the window boundary
  Both,     // headline estimates over all replicates, plus the excluded-set estimates
};

struct Plan {
  std::vector<FreezeThreshold> n{FreezeThreshold(64)};
  int multiplier = 8;              // window side = multiplier * N
  std::optional<int> window_side;  // overrides the multiplier; required for the unbounded threshold
  std::size_t replicates = 1000;
  std::uint64_t master_seed = 0;
  double a = 0.25;
  double b = 0.75;
  BoundaryPolicy policy = BoundaryPolicy::Both;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const Plan& plan);

/// Window side used for threshold `n` under `plan`.
int window_side_for(const Plan& plan, FreezeThreshold n);

/// Seed of the replicate streams for threshold `n`: substream(master, N),
/// with index 0 reserved for the unbounded threshold.
std::uint64_t stream_seed(std::uint64_t master_seed, FreezeThreshold n);

inline constexpr double kWilsonZ = 1.959963984540054;

struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double value = 0.0;
  double lo = 0.0;  // Wilson 95%
  double hi = 1.0;

  friend bool operator==(const Proportion&, const Proportion&) = default;
};
Proportion wilson(std::size_t successes, std::size_t trials, double z = kWilsonZ);

struct SweepRow {
  FreezeThreshold n = FreezeThreshold::unbounded();
  int window = 0;
  std::size_t replicates = 0;
  BoundaryPolicy policy = BoundaryPolicy::Both;
  Proportion interval;  // diam in (aN, bN)
  Proportion giant;     // diam >= N
  Proportion max;       // diam = 2N - 1
  std::size_t excluded_boundary = 0;
  // Under BoundaryPolicy::Both: the same estimates without boundary-touching replicates.
  std::optional<Proportion> interval_excluded, giant_excluded, max_excluded;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Origin statistics of replicates 0 .. count-1 of stream `seed` on `window`,
/// in replicate order.
std::vector<OriginStats> simulate_origins(const Window& window, FreezeThreshold n, std::uint64_t seed,
                                          std::size_t count, unsigned threads = 1);

/// Aggregates origin statistics into a row. Order-insensitive.
SweepRow summarize(const std::vector<OriginStats>& origins, FreezeThreshold n, int window, double a, double b,
                   BoundaryPolicy policy);

/// Replicates at plan.n.front().
SweepRow run_replicates(const Plan& plan, unsigned threads = 1);

/// One row per entry of plan.n.
std::vector<SweepRow> sweep(const Plan& plan, unsigned threads = 1);

struct Histogram {
  FreezeThreshold n = FreezeThreshold::unbounded();
  double lo = 0.0;
  double hi = 2.0;
  std::vector<std::size_t> counts;  // bin k covers [lo + k w, lo + (k+1) w)
  std::vector<double> mass;         // counts normalised to sum 1
  std::size_t excluded_boundary = 0;

  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
};

/// Histogram of diameter / N at plan.n.front(). Throws std::invalid_argument
/// for the unbounded threshold and std::logic_error on a diameter >= 2N.
Histogram diameter_histogram(const Plan& plan, unsigned threads = 1, int bins = 40);

}  // namespace frozenperc
