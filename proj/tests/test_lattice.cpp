#include <random>
#include <set>

#include "doctest.h"
#include "frozenperc/lattice.hpp"

using namespace frozenperc;

namespace {

const ShapeParams kParams{0.25, 0.5, 0.75, 0.8, 0.05};

bool has_violation(const std::vector<ParamViolation>& v, const std::string& name) {
  for (const auto& p : v) {
    if (p.name == name) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("build_box") {
  const Rect b4 = build_box(4);
  CHECK(b4 == Rect{-2, 2, -2, 2});
  CHECK(b4.vertex_count() == 25);

  const Rect b0 = build_box(0);
  CHECK(b0.vertex_count() == 1);
  CHECK(b0.contains(Vertex{0, 0}));

  const Rect b2 = build_box(2);
  CHECK(b2.vertex_count() == 9);
  CHECK(b2.diameter() == 2);

  CHECK_THROWS_AS(build_box(3), GeometryError);
  CHECK_THROWS_AS(build_box(-2), GeometryError);
}

TEST_CASE("chebyshev diameter equals the bounding-box diameter") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-30, 30);
  std::uniform_int_distribution<int> count(1, 50);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Vertex> vs(static_cast<std::size_t>(count(rng)));
    for (auto& v : vs) v = {coord(rng), coord(rng)};
    int brute = 0;
    for (const auto& p : vs) {
      for (const auto& q : vs) brute = std::max(brute, distance(p, q));
    }
    REQUIRE(chebyshev_diameter(vs) == brute);
  }
  CHECK(chebyshev_diameter({}) == 0);
}

TEST_CASE("dual edges") {
  const DualEdge h = dual_of(Edge{{0, 0}, Axis::Horizontal});
  CHECK(h.from == DualVertex{1, -1});  // (1/2, -1/2)
  CHECK(h.to == DualVertex{1, 1});     // (1/2, 1/2)

  const DualEdge v = dual_of(Edge{{0, 0}, Axis::Vertical});
  CHECK(v.from == DualVertex{-1, 1});
  CHECK(v.to == DualVertex{1, 1});

  CHECK_THROWS_AS(primal_of(DualVertex{1, 1}, DualVertex{3, 3}), GeometryError);
  CHECK_THROWS_AS(primal_of(DualVertex{0, 1}, DualVertex{2, 1}), GeometryError);
}

TEST_CASE("dual_of is a bijection on a 10x10 window") {
  const Window w = Window::centered(10);
  std::set<std::pair<DualVertex, DualVertex>> seen;
  for (std::size_t i = 0; i < w.edge_count(); ++i) {
    const Edge e = w.edge_at(i);
    REQUIRE(w.edge_index(e) == i);
    const DualEdge d = dual_of(e);
    REQUIRE(d.crossed == e);
    REQUIRE(primal_of(d) == e);
    REQUIRE(primal_of(d.to, d.from) == e);
    REQUIRE(seen.insert({d.from, d.to}).second);
  }
  CHECK(seen.size() == w.edge_count());
}

TEST_CASE("window indexing") {
  const Window w = Window::spanning({0, 2, 0, 1});
  CHECK(w.vertex_count() == 6);
  CHECK(w.edge_count() == 7);
  CHECK(w.horizontal_edge_count() == 4);
  for (std::size_t v = 0; v < w.vertex_count(); ++v) CHECK(w.vertex_index(w.vertex_at(v)) == v);
  auto [a, b] = w.endpoints(w.edge_index(Edge{{1, 0}, Axis::Vertical}));
  CHECK(w.vertex_at(a) == Vertex{1, 0});
  CHECK(w.vertex_at(b) == Vertex{1, 1});
  CHECK_THROWS_AS(w.edge_index(Edge{{2, 0}, Axis::Horizontal}), GeometryError);
  CHECK_THROWS_AS(Window::centered(7), GeometryError);
  CHECK(Window::centered(1024).edge_count() == 2u * 1025u * 1024u);
}

TEST_CASE("validate_params") {
  CHECK(validate_params(kParams).empty());

  ShapeParams wide = kParams;
  wide.eps = 0.1;  // 0.925 + 0.1 = 1.025
  auto v = validate_params(wide);
  CHECK(v.size() == 1);
  CHECK(has_violation(v, "eq2"));

  ShapeParams short_l = kParams;
  short_l.l = 0.5;  // 0.625 < 1 < 1.125
  CHECK(validate_params(short_l).empty());
  short_l.l = 0.3;  // 1 < 0.925 fails
  CHECK(has_violation(validate_params(short_l), "eq1.upper"));

  ShapeParams long_l = kParams;
  long_l.l = 1.0;  // 1.125 >= 1
  v = validate_params(long_l);
  CHECK(has_violation(v, "eq1.lower"));
  CHECK(has_violation(v, "eq2"));

  CHECK(has_violation(validate_params({0.5, 0.25, 0.75, 0.8, 0.05}), "order"));
}

TEST_CASE("construction geometry at N = 64") {
  const ProofGeometry g = build_proof_geometry(kParams, 64, Window::centered(512));
  CHECK(g.box_a == build_box(16));
  CHECK(g.box_c == build_box(32));
  CHECK(g.box_b == build_box(48));
  CHECK(g.margin == 3);        // 3.2
  CHECK(g.tube_length == 51);  // 51.2
  CHECK(g.box_outer == build_box(54));

  // R: west side is a central subsegment of the east side of B(cN)
  CHECK(g.r.x_min == g.box_c.x_max);
  CHECK(g.r.height() == g.margin);
  CHECK(g.r.y_min == -2);  // odd width shifts down
  CHECK(g.r.y_max == 1);
  CHECK(g.r.x_max == g.box_b.x_max + g.tube_length);

  CHECK(g.tube.height() == 3 * g.margin);
  CHECK(g.tube.width() == g.tube_length);
  CHECK(g.tube.x_min == g.box_outer.x_max);
  CHECK(g.r_prime.x_min == g.tube.x_min);
  CHECK(g.r_prime.width() == 4 * g.margin);
  CHECK(g.r_prime.y_min == g.tube.y_min);
  CHECK(g.r_prime.y_max == g.tube.y_max);

  // L1 sits on the rightmost margin-long piece of the north side of B(cN)
  // and reaches the boundary of lambda'
  CHECK(g.l1.y_min == g.box_c.y_max);
  CHECK(g.l1.x_max == g.box_c.x_max);
  CHECK(g.l1.width() == g.margin);
  CHECK(g.l1.y_max == g.box_outer.y_max);
  CHECK(g.lambda_prime.on_boundary({g.l1.x_min, g.l1.y_max}));
  CHECK(g.l2 == Rect{g.l1.x_min, g.l1.x_max, -g.l1.y_max, -g.l1.y_min});
}

TEST_CASE("lambda' is the eps-neighbourhood of lambda") {
  const std::vector<ShapeParams> grid = {
      {0.25, 0.5, 0.75, 0.8, 0.05}, {0.2, 0.4, 0.6, 0.85, 0.04}, {0.3, 0.45, 0.7, 0.8, 0.06},
      {0.1, 0.3, 0.9, 0.6, 0.05},  {0.25, 0.5, 0.75, 0.78, 0.08}};
  for (const auto& p : grid) {
    REQUIRE(validate_params(p).empty());
    for (int n : {40, 64, 100, 128, 131}) {
      const ProofGeometry g = build_proof_geometry(p, n);
      const Region nb = chebyshev_neighborhood(g.lambda, g.margin);
      CHECK(nb == g.lambda_prime);
      CHECK(nb.count() == g.lambda_prime.count());
    }
  }
}

TEST_CASE("construction geometry errors") {
  ShapeParams bad = kParams;
  bad.l = 1.0;
  try {
    build_proof_geometry(bad, 64);
    FAIL("expected rejection");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("eq1.lower") != std::string::npos);
  }
  CHECK_THROWS_AS(build_proof_geometry(kParams, 20), GeometryError);  // eps N = 1
  CHECK_THROWS_AS(build_proof_geometry(kParams, 64, Window::centered(64)), GeometryError);
  const ProofGeometry g = build_proof_geometry(kParams, 64);
  CHECK_NOTHROW(build_proof_geometry(kParams, 64, Window::centered(g.minimal_window_side())));
}

TEST_CASE("rounding") {
  CHECK(round_to_even(16.0) == 16);
  CHECK(round_to_even(17.0) == 18);  // tie goes up
  CHECK(round_to_even(16.9) == 16);
  CHECK(round_to_even(15.0) == 16);
  CHECK(round_to_int(3.5) == 4);
  CHECK(round_to_int(3.2) == 3);
}
