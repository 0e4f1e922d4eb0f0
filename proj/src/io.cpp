#include "frozenperc/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <ostream>
#include <stdexcept>

namespace frozenperc {

void to_json(Json& j, const Rect& r) {
  j = Json{{"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min}, {"y_max", r.y_max}};
}

void from_json(const Json& j, Rect& r) {
  r = Rect::make(j.at("x_min").get<int>(), j.at("x_max").get<int>(), j.at("y_min").get<int>(),
                 j.at("y_max").get<int>());
}

void to_json(Json& j, const ShapeParams& p) {
  j = Json{{"a", p.a}, {"c", p.c}, {"b", p.b}, {"l", p.l}, {"eps", p.eps}};
}

void from_json(const Json& j, ShapeParams& p) {
  p.a = j.at("a").get<double>();
  p.c = j.at("c").get<double>();
  p.b = j.at("b").get<double>();
  p.l = j.at("l").get<double>();
  p.eps = j.at("eps").get<double>();
}

void to_json(Json& j, const ProofGeometry& g) {
  j = Json{{"params", g.params},
           {"n", g.n},
           {"margin", g.margin},
           {"tube_length", g.tube_length},
           {"box_a", g.box_a},
           {"box_c", g.box_c},
           {"box_b", g.box_b},
           {"box_outer", g.box_outer},
           {"r", g.r},
           {"tube", g.tube},
           {"r_prime", g.r_prime},
           {"l1", g.l1},
           {"l2", g.l2},
           {"lambda", Json{{"union_of", Json::array({g.box_b, g.r})}, {"vertices", g.lambda.count()}}},
           {"lambda_prime",
            Json{{"union_of", Json::array({g.box_outer, g.tube})}, {"vertices", g.lambda_prime.count()}}},
           {"minimal_window_side", g.minimal_window_side()}};
}

void to_json(Json& j, const Circuit& c) {
  Json pts = Json::array();
  for (const DoubledPoint& p : c.points) pts.push_back(Json::array({p.x, p.y}));
  j = Json{{"kind", c.kind == CircuitKind::Primal ? "primal" : "dual"},
           {"coordinates", "doubled"},
           {"length", c.length()},
           {"points", std::move(pts)}};
}

void to_json(Json& j, const OriginStats& o) {
  j = Json{{"diameter", o.diameter}, {"frozen", o.frozen}, {"size", o.size}, {"boundary_margin", o.boundary_margin}};
}

void to_json(Json& j, const Estimate& e) {
  j = Json{{"replicates", e.replicates}, {"successes", e.successes}, {"value", e.value}, {"std_error", e.std_error}};
}

void to_json(Json& j, const TauSolution& s) {
  j = Json{{"tau", s.tau},         {"target", s.target}, {"p_hat", s.p_hat},       {"std_error", s.std_error},
           {"p_half", s.p_half},   {"steps", s.steps},   {"edge", to_string(s.edge)}, {"note", s.note}};
}

void to_json(Json& j, const EventReport& r) {
  j = Json{{"events", r.events}, {"all", r.all()}, {"alpha_hat", r.alpha_hat}, {"tau_hat", r.tau_hat}};
  j["gamma"] = r.gamma ? Json(*r.gamma) : Json(nullptr);
  j["pi"] = r.pi ? Json(*r.pi) : Json(nullptr);
}

void to_json(Json& j, const ImplicationVerdict& v) {
  j = Json{{"pass", v.pass}, {"lower", v.lower}, {"upper", v.upper}, {"origin", v.origin}, {"message", v.message}};
}

void to_json(Json& j, const Proportion& p) {
  j = Json{{"successes", p.successes}, {"trials", p.trials}, {"value", p.value}, {"lo", p.lo}, {"hi", p.hi}};
}

void to_json(Json& j, const SweepRow& row) {
  j = Json{{"N", to_string(row.n)},
           {"window", row.window},
           {"replicates", row.replicates},
           {"boundary_policy", to_string(row.policy)},
           {"p_interval", row.interval},
           {"p_giant", row.giant},
           {"p_max", row.max},
           {"excluded_boundary", row.excluded_boundary}};
  if (row.interval_excluded) {
    j["excluding_boundary"] =
        Json{{"p_interval", *row.interval_excluded}, {"p_giant", *row.giant_excluded}, {"p_max", *row.max_excluded}};
  }
}

void to_json(Json& j, const Histogram& h) {
  j = Json{{"N", to_string(h.n)},     {"lo", h.lo},         {"hi", h.hi},
           {"bins", h.counts.size()}, {"counts", h.counts}, {"mass", h.mass},
           {"excluded_boundary", h.excluded_boundary}};
}

void to_json(Json& j, const Plan& p) {
  Json ns = Json::array();
  for (const FreezeThreshold& n : p.n) ns.push_back(to_string(n));
  j = Json{{"n", std::move(ns)},
           {"multiplier", p.multiplier},
           {"window_side", p.window_side ? Json(*p.window_side) : Json(nullptr)},
           {"replicates", p.replicates},
           {"master_seed", p.master_seed},
           {"a", p.a},
           {"b", p.b},
           {"boundary_policy", to_string(p.policy)}};
}

const char* to_string(BoundaryPolicy p) {
  switch (p) {
    case BoundaryPolicy::Include:
      return "include";
    case BoundaryPolicy::Exclude:
      return "exclude";
    case BoundaryPolicy::Both:
      return "both";
  }
  return "?";
}

BoundaryPolicy parse_boundary_policy(const std::string& name) {
  if (name == "include") return BoundaryPolicy::Include;
  if (name == "exclude") return BoundaryPolicy::Exclude;
  if (name == "both") return BoundaryPolicy::Both;
  throw std::invalid_argument("boundary: expected include, exclude or both, got '" + name + "'");
}

const char* to_string(BracketEdge e) {
  switch (e) {
    case BracketEdge::None:
      return "none";
    case BracketEdge::Lower:
      return "lower";
    case BracketEdge::Upper:
      return "upper";
  }
  return "?";
}

const char* to_string(SearchStrategy s) { return s == SearchStrategy::Planted ? "planted" : "uniform"; }

std::string to_string(FreezeThreshold n) { return n.is_unbounded() ? "unbounded" : std::to_string(n.value()); }

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << to_string(r.n) << ',' << r.window << ',' << r.replicates << ',' << format_double(r.interval.value) << ','
        << format_double(r.interval.lo) << ',' << format_double(r.interval.hi) << ','
        << format_double(r.giant.value) << ',' << format_double(r.giant.lo) << ',' << format_double(r.giant.hi)
        << ',' << format_double(r.max.value) << ',' << r.excluded_boundary << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_lo,bin_hi,count,mass\n";
  const double w = h.bin_width();
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << format_double(h.lo + w * static_cast<double>(k)) << ',' << format_double(h.lo + w * static_cast<double>(k + 1))
        << ',' << h.counts[k] << ',' << format_double(h.mass[k]) << '\n';
  }
}

Json make_manifest(const std::string& command, const Json& config, std::uint64_t master_seed,
                   const std::string& output, const std::string& started_utc, double wall_seconds) {
  return Json{{"artifact_version", kArtifactVersion},
              {"config_schema_version", kConfigSchemaVersion},
              {"command", command},
              {"master_seed", master_seed},
              {"output", output},
              {"config", config},
              {"timestamp", Json{{"started_utc", started_utc}, {"wall_seconds", wall_seconds}}}};
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace frozenperc
