#include "frozenperc/clocks.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace frozenperc {

double clock_value(std::uint64_t master_seed, std::uint64_t replicate, std::uint64_t edge_index) {
  const std::uint64_t stream = substream(master_seed, replicate);
  const std::uint64_t bits = mix64(stream + 0x9e3779b97f4a7c15ULL * (edge_index + 1));
  // (k + 1/2) / 2^52 with k < 2^52 is exact and never 0 or 1.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
}

EdgeTimes EdgeTimes::assign(const Window& window, std::uint64_t master_seed, std::uint64_t replicate) {
  std::vector<double> times(window.edge_count());
  const std::uint64_t stream = substream(master_seed, replicate);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::uint64_t bits = mix64(stream + 0x9e3779b97f4a7c15ULL * (i + 1));
    times[i] = (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
  }
  return EdgeTimes(window, std::move(times), {master_seed, replicate});
}

EdgeTimes EdgeTimes::from_values(const Window& window, std::vector<double> times, SeedInfo seed) {
  if (times.size() != window.edge_count()) {
    throw std::invalid_argument("expected " + std::to_string(window.edge_count()) + " edge times, got " +
                                std::to_string(times.size()));
  }
  for (double t : times) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("edge time outside (0, 1)");
  }
  return EdgeTimes(window, std::move(times), seed);
}

void EdgeTimes::write_binary(std::ostream& out) const {
  static_assert(sizeof(double) == 8);
  for (double t : times_) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(t);
    unsigned char buf[8];
    for (int k = 0; k < 8; ++k) buf[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char*>(buf), 8);
  }
}

EdgeTimes EdgeTimes::read_binary(std::istream& in, const Window& window) {
  std::vector<double> times(window.edge_count());
  for (double& t : times) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) {
      throw std::runtime_error("edge-time stream ended early");
    }
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
    t = std::bit_cast<double>(bits);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("edge-time stream longer than the window's edge count");
  }
  return from_values(window, std::move(times));
}

bool is_open(const EdgeTimes& times, const Edge& e, double t) {
  const auto idx = times.window().find_edge(e);
  if (!idx) throw GeometryError("edge outside the clock window");
  return times.time(*idx) < t;
}

}  // namespace frozenperc
