#pragma once

#include <optional>
#include <span>
#include <vector>

#include "frozenperc/clocks.hpp"
#include "frozenperc/lattice.hpp"

namespace frozenperc {

enum class CircuitKind : std::uint8_t { Primal, Dual };

/// Closed simple lattice cycle in doubled coordinates. Primal circuits run
/// through vertices (even coordinates), dual circuits through face centres
/// (odd coordinates). Points run counter-clockwise from the leftmost point
/// of the lowest row.
struct Circuit {
  CircuitKind kind = CircuitKind::Primal;
  std::vector<DoubledPoint> points;

  bool empty() const { return points.empty(); }
  std::size_t length() const { return points.size(); }
  /// Primal edges along the cycle (primal) or crossed by it (dual).
  std::vector<Edge> edges() const;
  /// Primal vertices on the cycle; empty for dual circuits.
  std::vector<Vertex> vertices() const;
  /// Throws GeometryError unless consecutive points are unit steps of one
  /// parity class and no point repeats.
  void validate() const;
};

/// Region between an inner and an outer vertex set. The inner set must lie
/// inside the outer one and stay off its boundary.
struct Annulus {
  Region inner;
  Region outer;

  static Annulus make(Region inner, Region outer);
  static Annulus make(const Rect& inner, const Rect& outer) {
    return make(Region::from_rect(inner), Region::from_rect(outer));
  }
  bool in_ring(Vertex v) const { return outer.contains(v) && !inner.contains(v); }
};

/// t-open path inside `rect` (edges with both endpoints in it) from its west
/// column to its east column. Throws GeometryError on zero width.
bool has_horizontal_open_crossing(const EdgeTimes& times, const Rect& rect, double t);

/// t-open path inside `region` between columns `west` and `east`.
bool has_horizontal_open_crossing(const EdgeTimes& times, const Region& region, int west, int east, double t);

/// Smallest clock value c such that `rect` is crossed horizontally at
/// every t > c (the minimax clock over west-east paths); crossing at t
/// holds iff c < t.
double crossing_threshold(const EdgeTimes& times, const Rect& rect);

/// t-open circuit made of edges with both endpoints in the ring, surrounding
/// the inner set. Decided on the dual side: true iff there is no dual path
/// from the inner set to the outside avoiding open ring edges.
bool has_open_circuit(const EdgeTimes& times, const Annulus& annulus, double t);
/// Dual path from the inner set to the outside crossing no t-open ring edge.
bool has_closed_dual_crossing(const EdgeTimes& times, const Annulus& annulus, double t);

/// t-closed dual circuit surrounding the inner set whose dual edges cross
/// edges of the outer set. Decided on the primal side: true iff no t-open
/// path inside the outer set joins the inner set to the outer boundary.
bool has_closed_dual_circuit(const EdgeTimes& times, const Annulus& annulus, double t);
bool has_open_crossing(const EdgeTimes& times, const Annulus& annulus, double t);

/// Innermost t-open circuit in the ring: outer boundary of the inner set
/// together with every face reachable from it through the dual without
/// crossing an open ring edge.
std::optional<Circuit> innermost_open_circuit(const EdgeTimes& times, const Annulus& annulus, double t);

/// Outermost t-closed dual circuit: boundary of the component of the inner
/// set after removing everything joined to the outer boundary by t-open
/// paths.
std::optional<Circuit> outermost_closed_dual_circuit(const EdgeTimes& times, const Annulus& annulus, double t);

/// Path of t-closed dual edges among faces of `rect` joining a face next to
/// `from` to a face next to `to`. A face is next to a primal circuit if it
/// borders one of its edges, and next to a dual circuit if it lies on it.
bool has_closed_dual_path_connecting(const EdgeTimes& times, const Rect& rect, const Circuit& from,
                                     const Circuit& to, double t);

/// t-open path through vertices of `domain` from any source to any target.
bool has_open_path(const EdgeTimes& times, const Region& domain, std::span<const Vertex> sources,
                   const Region& targets, double t);

/// Primal vertices strictly enclosed by the circuit (ray parity).
Region interior_of(const Circuit& circuit);
/// Ray-parity test for one vertex; vertices on a primal circuit are not enclosed.
bool encloses(const Circuit& circuit, Vertex v);

}  // namespace frozenperc
