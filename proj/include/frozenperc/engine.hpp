#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "frozenperc/clocks.hpp"
#include "frozenperc/lattice.hpp"

namespace frozenperc {

/// Freezing diameter N, or no freezing at all (plain Bernoulli dynamics).
class FreezeThreshold {
 public:
  explicit FreezeThreshold(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("freezing diameter must be >= 1");
  }
  static FreezeThreshold unbounded() { return FreezeThreshold(); }

  bool is_unbounded() const { return n_ == kUnbounded; }
  int value() const {
    if (is_unbounded()) throw std::logic_error("unbounded threshold has no value");
    return n_;
  }
  bool reached(int diameter) const { return diameter >= n_; }

  friend bool operator==(const FreezeThreshold&, const FreezeThreshold&) = default;

 private:
  static constexpr int kUnbounded = std::numeric_limits<int>::max();
  FreezeThreshold() : n_(kUnbounded) {}
  int n_;
};

struct ClusterRecord {
  std::uint32_t root = 0;  // vertex index of the union-find representative
  std::uint32_t size = 1;
  Rect bbox;
  bool frozen = false;
  std::optional<double> freeze_time;

  int diameter() const { return bbox.diameter(); }
};

enum class EventKind : std::uint8_t {
  Merge,     // edge opened and joined two clusters
  Internal,  // edge opened inside one unfrozen cluster
  Blocked,   // edge touches a frozen cluster and stays closed forever
};

struct EngineEvent {
  double time = 0.0;
  std::uint32_t edge = 0;
  EventKind kind = EventKind::Merge;
};

struct FinalState {
  Window window = Window::centered(2);
  FreezeThreshold n = FreezeThreshold::unbounded();
  double time = 1.0;                       // edges with tau_e < time were processed
  std::vector<std::uint8_t> open_edges;    // per canonical edge index
  std::vector<std::uint32_t> cluster_of;   // per vertex: index into clusters
  std::vector<ClusterRecord> clusters;     // ordered by smallest member vertex index
  std::vector<EngineEvent> event_log;      // empty unless requested

  const ClusterRecord& cluster_at(Vertex v) const { return clusters[cluster_of[window.vertex_index(v)]]; }
};

struct OriginStats {
  int diameter = 0;
  bool frozen = false;
  std::uint32_t size = 1;
  int boundary_margin = 0;  // Chebyshev distance from the cluster bbox to the window boundary

  friend bool operator==(const OriginStats&, const OriginStats&) = default;
};

struct RunOptions {
  double until = 1.0;  // process edges with tau_e < until
  bool record_events = false;
};

/// Reusable union-find workspace; one per thread.
class Engine {
 public:
  FinalState run(const EdgeTimes& times, FreezeThreshold n, const RunOptions& options = {});
  /// Same dynamics to time 1, reporting only the origin's cluster.
  OriginStats run_origin(const EdgeTimes& times, FreezeThreshold n);

 private:
  struct Box {
    int x_min, x_max, y_min, y_max;
  };
  struct Ring {
    double time;
    std::uint32_t edge;
  };

  void sort_rings(std::span<const double> values, double until);
  void replay(const EdgeTimes& times, FreezeThreshold n, double until, std::vector<std::uint8_t>* open,
              std::vector<EngineEvent>* log);
  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  std::vector<Ring> order_;
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<Box> bbox_;
  std::vector<double> freeze_time_;  // NaN while unfrozen
};

/// Frozen dynamics on `window`; throws std::invalid_argument if `times`
/// belongs to a different window.
FinalState run_frozen(const Window& window, const EdgeTimes& times, FreezeThreshold n,
                      const RunOptions& options = {});

/// Configuration of the frozen process at time t (edges with tau_e < t).
FinalState state_at(const Window& window, const EdgeTimes& times, FreezeThreshold n, double t);

/// Throws std::invalid_argument when the origin is outside the window.
OriginStats origin_stats(const FinalState& state);

/// Per-edge open bit in canonical edge order; edge i is bit (i % 8) of byte i / 8.
void write_open_bitmap(std::ostream& out, const FinalState& state);
/// Columns: cluster_id,size,diameter,frozen,freeze_time (empty when unfrozen).
void write_cluster_csv(std::ostream& out, const FinalState& state);

}  // namespace frozenperc
