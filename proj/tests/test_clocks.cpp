#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "frozenperc/clocks.hpp"

using namespace frozenperc;

namespace {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("assignment is deterministic") {
  const Window w = Window::centered(64);
  const EdgeTimes a = EdgeTimes::assign(w, 42, 3);
  const EdgeTimes b = EdgeTimes::assign(w, 42, 3);
  CHECK(a == b);
  CHECK(a.seed() == SeedInfo{42, 3});
  CHECK_FALSE(a == EdgeTimes::assign(w, 42, 4));
  CHECK_FALSE(a == EdgeTimes::assign(w, 43, 3));
  // keyed per edge: the same edge index gives the same clock in a larger window
  CHECK(a.time(17) == clock_value(42, 3, 17));
}

TEST_CASE("times are uniform on (0,1)") {
  const Window w = Window::centered(512);
  const EdgeTimes t = EdgeTimes::assign(w, 2024, 0);
  double sum = 0.0;
  for (double v : t.values()) {
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  const double n = static_cast<double>(t.size());
  const double se = 1.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(sum / n - 0.5) < 3.0 * se);
}

TEST_CASE("two replicates pass a two-sample KS test") {
  const Window w = Window::centered(128);
  const EdgeTimes a = EdgeTimes::assign(w, 99, 0);
  const EdgeTimes b = EdgeTimes::assign(w, 99, 1);
  const std::vector<double> va(a.values().begin(), a.values().end());
  const std::vector<double> vb(b.values().begin(), b.values().end());
  const double n = static_cast<double>(va.size());
  const double m = static_cast<double>(vb.size());
  const double critical = 1.949 * std::sqrt((n + m) / (n * m));  // alpha = 1e-3
  CHECK(ks_statistic(va, vb) < critical);
}

TEST_CASE("is_open thresholds") {
  const Window w = Window::centered(20);
  const EdgeTimes t = EdgeTimes::assign(w, 5, 0);
  for (std::size_t i = 0; i < w.edge_count(); ++i) {
    const Edge e = w.edge_at(i);
    REQUIRE_FALSE(is_open(t, e, 0.0));
    REQUIRE(is_open(t, e, 1.0));
    bool prev = false;
    for (int k = 0; k <= 100; ++k) {
      const bool now = is_open(t, e, k / 100.0);
      REQUIRE((!prev || now));
      REQUIRE(now == (t.time(i) < k / 100.0));
      REQUIRE(is_closed(t, e, k / 100.0) == !now);
      prev = now;
    }
  }
  CHECK_THROWS_AS(is_open(t, Edge{{10, 0}, Axis::Horizontal}, 0.5), GeometryError);
}

TEST_CASE("times are pairwise distinct") {
  const Window w = Window::centered(256);
  const EdgeTimes t = EdgeTimes::assign(w, 7, 11);
  std::vector<double> v(t.values().begin(), t.values().end());
  std::sort(v.begin(), v.end());
  CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
}

TEST_CASE("binary round trip") {
  const Window w = Window::centered(16);
  const EdgeTimes t = EdgeTimes::assign(w, 1, 2);
  std::stringstream buf;
  t.write_binary(buf);
  CHECK(buf.str().size() == 8 * w.edge_count());
  const EdgeTimes back = EdgeTimes::read_binary(buf, w);
  CHECK(std::equal(back.values().begin(), back.values().end(), t.values().begin()));

  // little-endian layout of the first value
  std::uint64_t bits = 0;
  const double first = t.time(0);
  std::memcpy(&bits, &first, 8);
  const std::string s = buf.str();
  for (int k = 0; k < 8; ++k) {
    CHECK(static_cast<unsigned char>(s[k]) == ((bits >> (8 * k)) & 0xff));
  }

  std::stringstream shorter(s.substr(0, s.size() - 8));
  CHECK_THROWS(EdgeTimes::read_binary(shorter, w));
  std::stringstream longer(s + std::string(8, '\0'));
  CHECK_THROWS(EdgeTimes::read_binary(longer, w));
}

TEST_CASE("from_values validation") {
  const Window w = Window::spanning({0, 1, 0, 0});
  CHECK_NOTHROW(EdgeTimes::from_values(w, {0.3}));
  CHECK_THROWS(EdgeTimes::from_values(w, {0.0}));
  CHECK_THROWS(EdgeTimes::from_values(w, {1.0}));
  CHECK_THROWS(EdgeTimes::from_values(w, {0.3, 0.4}));
}

TEST_CASE("tie order") {
  CHECK(earlier(0.1, 5, 0.2, 1));
  CHECK(earlier(0.2, 1, 0.2, 5));
  CHECK_FALSE(earlier(0.2, 5, 0.2, 1));
  CHECK_FALSE(earlier(0.2, 5, 0.2, 5));
}
