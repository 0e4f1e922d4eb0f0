#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "frozenperc/lattice.hpp"

namespace frozenperc {

struct SeedInfo {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate = 0;

  friend bool operator==(const SeedInfo&, const SeedInfo&) = default;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key, e.g. per replicate or per N.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Counter-based clock of edge `edge_index` in stream (master, replicate).
/// The result lies strictly inside (0, 1) on a grid of spacing 2^-52.
double clock_value(std::uint64_t master_seed, std::uint64_t replicate, std::uint64_t edge_index);

/// i.i.d. uniform opening times, one per canonical edge of a window.
class EdgeTimes {
 public:
  static EdgeTimes assign(const Window& window, std::uint64_t master_seed, std::uint64_t replicate);
  /// Explicit times (hand-built configurations, replays); each must be in (0, 1).
  static EdgeTimes from_values(const Window& window, std::vector<double> times, SeedInfo seed = {});

  const Window& window() const { return window_; }
  const SeedInfo& seed() const { return seed_; }
  std::size_t size() const { return times_.size(); }
  std::span<const double> values() const { return times_; }

  double time(std::size_t edge_index) const { return times_[edge_index]; }
  /// Throws GeometryError for edges outside the window.
  double time(const Edge& e) const { return times_[window_.edge_index(e)]; }

  /// Little-endian IEEE-754 binary64, one per edge in canonical order, no header.
  void write_binary(std::ostream& out) const;
  static EdgeTimes read_binary(std::istream& in, const Window& window);

  friend bool operator==(const EdgeTimes&, const EdgeTimes&) = default;

 private:
  EdgeTimes(const Window& window, std::vector<double> times, SeedInfo seed)
      : window_(window), times_(std::move(times)), seed_(seed) {}
  Window window_;
  std::vector<double> times_;
  SeedInfo seed_;
};

/// t-open: tau_e < t. Throws GeometryError for unknown edges.
bool is_open(const EdgeTimes& times, const Edge& e, double t);
inline bool is_closed(const EdgeTimes& times, const Edge& e, double t) { return !is_open(times, e, t); }

/// Strict order used by every replay: by time, ties broken by canonical index.
inline bool earlier(double ta, std::size_t ia, double tb, std::size_t ib) {
  return ta < tb || (ta == tb && ia < ib);
}

}  // namespace frozenperc
