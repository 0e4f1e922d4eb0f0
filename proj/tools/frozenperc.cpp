// Command-line front end: simulate, sweep, hist, crossing, solve-tau, lemma, dump-geometry.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frozenperc/io.hpp"
#include "frozenperc/lemma.hpp"
#include "frozenperc/montecarlo.hpp"

using namespace frozenperc;

namespace {

/// Invalid user input; exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

FreezeThreshold parse_n(const std::string& text) {
  if (text == "unbounded" || text == "inf") return FreezeThreshold::unbounded();
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 1) throw ConfigError("n: expected a positive integer or 'unbounded', got '" + text + "'");
  return FreezeThreshold(v);
}

ShapeParams parse_shape(const std::string& text) {
  ShapeParams p{0.25, 0.5, 0.75, 0.8, 0.05};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("params: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("params." + key + ": not a number");
    }
    if (key == "a") {
      p.a = value;
    } else if (key == "c") {
      p.c = value;
    } else if (key == "b") {
      p.b = value;
    } else if (key == "l") {
      p.l = value;
    } else if (key == "eps") {
      p.eps = value;
    } else {
      throw ConfigError("params: unknown key '" + key + "'");
    }
  }
  if (auto v = validate_params(p); !v.empty()) {
    throw ConfigError("params: inequality " + v.front().name + " violated (" + v.front().detail + ")");
  }
  return p;
}

Rect parse_rect(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("rect: '" + item + "' is not an integer");
    }
  }
  if (v.size() != 4) throw ConfigError("rect: expected x_min,x_max,y_min,y_max");
  if (v[0] >= v[1] || v[2] > v[3]) throw ConfigError("rect: need x_min < x_max and y_min <= y_max");
  return Rect{v[0], v[1], v[2], v[3]};
}

std::string json_scalar_text(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ConfigError("config." + key + ": unsupported value " + v.dump());
}

/// Applies a JSON config file as defaults; command-line flags still win.
void apply_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "schema_version") {
      if (value != kConfigSchemaVersion) throw ConfigError("config.schema_version: unsupported " + value.dump());
      continue;
    }
    if (key == "config") throw ConfigError("config.config: nesting is not supported");
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("config." + key + ": unknown field for '" + sub.get_name() + "'");
    std::string text;
    if (value.is_array()) {
      for (const Json& e : value) text += (text.empty() ? "" : ",") + json_scalar_text(e, key);
    } else {
      text = json_scalar_text(value, key);
    }
    opt->default_str(text);
    opt->default_val(text);
  }
}

struct Common {
  std::string out;
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct Options {
  Common common;
  std::string n = "64";
  std::vector<std::string> ns{"32", "64", "128"};
  std::size_t replicates = 1000;
  double a = 0.25;
  double b = 0.75;
  int multiplier = 8;
  int window = 0;
  std::string boundary = "both";
  std::string format = "csv";
  int bins = 40;
  std::string params = "a=0.25,c=0.5,b=0.75,l=0.8,eps=0.05";
  std::string rect;
  std::string region;
  double t = 0.5;
  double tol = 0.02;
  std::size_t alpha_replicates = 0;
  double tau = 0.0;
  std::string strategy = "planted";
  std::size_t samples = 20;
  std::size_t max_attempts = 2000;
};

unsigned default_threads() {
  if (const char* env = std::getenv("FROZENPERC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("FROZENPERC_THREADS: not a non-negative integer: '") + env + "'");
  }
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool out_required) {
  auto* out = sub->add_option("--out", c.out, "Output file; a manifest is written to <out>.manifest.json");
  if (out_required) out->required();
  sub->add_option("--config", c.config, "JSON file of option values (keys are long flag names); flags override it");
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads, 0 = all cores (default: $FROZENPERC_THREADS or 0)")
      ->capture_default_str();
}

void add_plan(CLI::App* sub, Options& o) {
  sub->add_option("--replicates", o.replicates, "Replicates per N")->capture_default_str();
  sub->add_option("--a", o.a, "Lower end of the diameter interval, in units of N")->capture_default_str();
  sub->add_option("--b", o.b, "Upper end of the diameter interval, in units of N")->capture_default_str();
  sub->add_option("--multiplier", o.multiplier, "Window side as a multiple of N")->capture_default_str();
  sub->add_option("--window", o.window, "Explicit even window side (required with --n unbounded)");
  sub->add_option("--boundary", o.boundary, "Boundary policy: include, exclude or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"include", "exclude", "both"}));
}

void add_geometry(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Freezing diameter N of the construction")->capture_default_str();
  sub->add_option("--params", o.params, "Shape parameters a=..,c=..,b=..,l=..,eps=..")->capture_default_str();
}

Plan make_plan(const Options& o, std::vector<FreezeThreshold> ns) {
  Plan p;
  p.n = std::move(ns);
  p.multiplier = o.multiplier;
  if (o.window != 0) p.window_side = o.window;
  p.replicates = o.replicates;
  p.master_seed = o.common.seed;
  p.a = o.a;
  p.b = o.b;
  p.policy = parse_boundary_policy(o.boundary);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

ProofGeometry make_geometry(const Options& o) {
  const FreezeThreshold n = parse_n(o.n);
  if (n.is_unbounded()) throw ConfigError("n: the construction needs a finite N");
  try {
    return build_proof_geometry(parse_shape(o.params), n.value());
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("n/params: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << content) || !(f.flush())) throw ConfigError("out: cannot write '" + path + "'");
}

/// Seeds of the two estimation stages of solve-tau and lemma.
constexpr std::uint64_t kAlphaStream = 1;
constexpr std::uint64_t kTauStream = 2;
constexpr std::uint64_t kSearchStream = 3;

struct TauPipeline {
  Estimate alpha;
  TauSolution tau;
};

TauPipeline run_tau(const Options& o, const ProofGeometry& g, unsigned threads) {
  if (o.tol <= 0.0) throw ConfigError("tol: must be positive");
  if (o.replicates < 1) throw ConfigError("replicates: must be >= 1");
  TauPipeline p;
  const std::size_t alpha_reps = o.alpha_replicates ? o.alpha_replicates : o.replicates;
  p.alpha = estimate_alpha(g, alpha_reps, substream(o.common.seed, kAlphaStream), threads);
  p.tau = solve_tau(g, p.alpha.value / 2.0, o.replicates, o.tol, substream(o.common.seed, kTauStream), threads);
  return p;
}

std::string describe(const TauPipeline& p) {
  std::ostringstream s;
  s << "alpha_hat = " << format_double(p.alpha.value) << " (SE " << format_double(p.alpha.std_error) << ", "
    << p.alpha.successes << "/" << p.alpha.replicates << ")\n"
    << "target    = " << format_double(p.tau.target) << "\n"
    << "tau_hat   = " << format_double(p.tau.tau) << "\n"
    << "P_hat(R' crossed at tau_hat) = " << format_double(p.tau.p_hat) << " (SE " << format_double(p.tau.std_error)
    << ")\n"
    << "P_hat(R' crossed at 1/2)     = " << format_double(p.tau.p_half) << "\n"
    << "bisection steps = " << p.tau.steps << ", bracket edge = " << to_string(p.tau.edge) << "\n";
  if (!p.tau.note.empty()) s << "note: " << p.tau.note << "\n";
  return s.str();
}

Json tau_json(const TauPipeline& p) { return Json{{"alpha", p.alpha}, {"tau", p.tau}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frozen bond percolation on the square lattice"};
  app.require_subcommand(1);
  Options o;
  int exit_code = 0;
  try {
    o.common.threads = default_threads();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  auto* simulate = app.add_subcommand("simulate", "Replicates at one N; writes one sweep row");
  add_common(simulate, o.common, true);
  simulate->add_option("--n", o.n, "Freezing diameter N, or 'unbounded'")->capture_default_str();
  add_plan(simulate, o);
  simulate->add_option("--format", o.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "Replicates for a list of N; one row each");
  add_common(sweep_cmd, o.common, true);
  sweep_cmd->add_option("--n", o.ns, "Comma-separated freezing diameters")->delimiter(',')->capture_default_str();
  add_plan(sweep_cmd, o);
  sweep_cmd->add_option("--format", o.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));

  auto* hist = app.add_subcommand("hist", "Histogram of origin-cluster diameter / N over [0, 2]");
  add_common(hist, o.common, true);
  hist->add_option("--n", o.n, "Freezing diameter N")->capture_default_str();
  add_plan(hist, o);
  hist->add_option("--bins", o.bins, "Number of bins")->capture_default_str()->check(CLI::PositiveNumber);
  hist->add_option("--format", o.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));

  auto* crossing = app.add_subcommand("crossing", "Horizontal t-open crossing probability of a rectangle");
  add_common(crossing, o.common, false);
  crossing->add_option("--rect", o.rect, "x_min,x_max,y_min,y_max");
  crossing->add_option("--region", o.region, "Use a region of the construction instead: r or r_prime")
      ->check(CLI::IsMember({"r", "r_prime"}));
  add_geometry(crossing, o);
  crossing->add_option("--t", o.t, "Time parameter")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  crossing->add_option("--replicates", o.replicates, "Samples")->capture_default_str();

  auto* solve = app.add_subcommand("solve-tau", "Estimate alpha on R at 1/2, then solve P(R' crossed at tau) = alpha/2");
  add_common(solve, o.common, false);
  add_geometry(solve, o);
  solve->add_option("--replicates", o.replicates, "Samples for the R' crossing estimates")->capture_default_str();
  solve->add_option("--alpha-replicates", o.alpha_replicates, "Samples for alpha (default: --replicates)");
  solve->add_option("--tol", o.tol, "Bisection tolerance")->capture_default_str();

  auto* lemma = app.add_subcommand("lemma", "Search configurations where all six events hold and verify the implication");
  add_common(lemma, o.common, false);
  add_geometry(lemma, o);
  lemma->add_option("--tau", o.tau, "Use this tau instead of solving for it")->check(CLI::Range(0.0, 0.5));
  lemma->add_option("--replicates", o.replicates, "Samples for the tau estimates")->capture_default_str();
  lemma->add_option("--alpha-replicates", o.alpha_replicates, "Samples for alpha (default: --replicates)");
  lemma->add_option("--tol", o.tol, "Bisection tolerance")->capture_default_str();
  lemma->add_option("--strategy", o.strategy, "uniform or planted")
      ->capture_default_str()
      ->check(CLI::IsMember({"uniform", "planted"}));
  lemma->add_option("--samples", o.samples, "All-true configurations wanted")->capture_default_str();
  lemma->add_option("--max-attempts", o.max_attempts, "Give up after this many configurations")->capture_default_str();

  auto* dump = app.add_subcommand("dump-geometry", "Print the lattice regions of the construction as JSON");
  add_common(dump, o.common, false);
  add_geometry(dump, o);

  try {
    // locate the subcommand and its --config before the real parse
    for (int i = 1; i < argc; ++i) {
      if (CLI::App* sub = app.get_subcommand_no_throw(argv[i])) {
        for (int k = i + 1; k < argc; ++k) {
          const std::string arg = argv[k];
          if (arg == "--config" && k + 1 < argc) apply_config(*sub, argv[k + 1]);
          if (arg.starts_with("--config=")) apply_config(*sub, arg.substr(9));
        }
        break;
      }
    }
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  // every option of the subcommand, as resolved after config and flags
  Json config = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "out" || name == "threads") continue;
    const auto& res = opt->results();
    if (!res.empty()) {
      config[name] = res.size() == 1 ? Json(res.front()) : Json(res);
    } else if (!opt->get_default_str().empty()) {
      config[name] = opt->get_default_str();
    }
  }

  std::string payload;
  try {
    if (!o.common.out.empty() && !std::ofstream(o.common.out, std::ios::binary | std::ios::app)) {
      throw ConfigError("out: cannot write '" + o.common.out + "'");
    }
    const unsigned threads = o.common.threads;
    if (command == "simulate" || command == "sweep") {
      std::vector<FreezeThreshold> ns;
      if (command == "simulate") {
        ns.push_back(parse_n(o.n));
      } else {
        for (const std::string& s : o.ns) ns.push_back(parse_n(s));
      }
      const Plan plan = make_plan(o, ns);
      const std::vector<SweepRow> rows = sweep(plan, threads);
      if (o.format == "json") {
        payload = Json{{"plan", plan}, {"rows", rows}}.dump(2) + "\n";
      } else {
        std::ostringstream s;
        write_sweep_csv(s, rows);
        payload = s.str();
      }
      for (const SweepRow& r : rows) {
        std::cout << "N=" << to_string(r.n) << " window=" << r.window << " p_interval=" << format_double(r.interval.value)
                  << " [" << format_double(r.interval.lo) << ", " << format_double(r.interval.hi) << "]"
                  << " p_giant=" << format_double(r.giant.value) << " p_max=" << format_double(r.max.value)
                  << " excluded_boundary=" << r.excluded_boundary << "\n";
      }
    } else if (command == "hist") {
      const Plan plan = make_plan(o, {parse_n(o.n)});
      if (plan.n.front().is_unbounded()) throw ConfigError("n: histogram needs a finite N");
      const Histogram h = diameter_histogram(plan, threads, o.bins);
      if (o.format == "json") {
        payload = Json{{"plan", plan}, {"histogram", h}}.dump(2) + "\n";
      } else {
        std::ostringstream s;
        write_histogram_csv(s, h);
        payload = s.str();
      }
      std::cout << "N=" << to_string(h.n) << " bins=" << h.counts.size() << " excluded_boundary=" << h.excluded_boundary
                << "\n";
    } else if (command == "crossing") {
      if (o.rect.empty() == o.region.empty()) throw ConfigError("rect/region: give exactly one of --rect and --region");
      if (o.replicates < 1) throw ConfigError("replicates: must be >= 1");
      Rect rect;
      if (!o.rect.empty()) {
        rect = parse_rect(o.rect);
      } else {
        const ProofGeometry g = make_geometry(o);
        rect = o.region == "r" ? g.r : g.r_prime;
      }
      const Estimate e = estimate_crossing(rect, o.t, o.replicates, o.common.seed, threads);
      payload = Json{{"rect", rect}, {"t", o.t}, {"estimate", e}}.dump(2) + "\n";
      std::cout << "P_hat = " << format_double(e.value) << " (SE " << format_double(e.std_error) << ", " << e.successes
                << "/" << e.replicates << ")\n";
    } else if (command == "solve-tau") {
      const ProofGeometry g = make_geometry(o);
      const TauPipeline p = run_tau(o, g, threads);
      payload = tau_json(p).dump(2) + "\n";
      std::cout << describe(p);
    } else if (command == "lemma") {
      const ProofGeometry g = make_geometry(o);
      Json result = Json::object();
      double tau = o.tau;
      if (lemma->get_option("--tau")->count() == 0 && !config.contains("tau")) {
        const TauPipeline p = run_tau(o, g, threads);
        std::cout << describe(p);
        result["tau_solution"] = tau_json(p);
        tau = p.tau.tau;
      }
      const LemmaParams lp{g.params, g.n, tau};
      try {
        validate(lp);
      } catch (const GeometryError& e) {
        throw ConfigError(std::string("tau: ") + e.what());
      }
      const SearchStrategy strategy = o.strategy == "planted" ? SearchStrategy::Planted : SearchStrategy::Uniform;
      const SearchResult sr = search_lemma_samples(lp, g, strategy, o.samples, o.max_attempts,
                                                   substream(o.common.seed, kSearchStream), threads);
      Json samples = Json::array();
      for (const SearchSample& s : sr.samples) samples.push_back(Json{{"replicate", s.replicate}, {"verdict", s.verdict}});
      result["tau"] = tau;
      result["strategy"] = to_string(strategy);
      result["attempts"] = sr.attempts;
      result["event_counts"] = sr.event_counts;
      result["all_true"] = sr.all_true;
      result["passed"] = sr.passed;
      result["samples"] = std::move(samples);
      payload = result.dump(2) + "\n";
      std::cout << "tau = " << format_double(tau) << ", strategy = " << to_string(strategy) << "\n"
                << "attempts = " << sr.attempts << ", event counts =";
      for (std::size_t c : sr.event_counts) std::cout << " " << c;
      std::cout << "\nall six events: " << sr.all_true << ", implication verified: " << sr.passed << "\n";
      if (sr.passed != sr.all_true) {
        std::cerr << "invariant violation: implication failed on " << (sr.all_true - sr.passed) << " configuration(s)\n";
        exit_code = 1;
      }
    } else if (command == "dump-geometry") {
      payload = Json(make_geometry(o)).dump(2) + "\n";
      std::cout << payload;
    }

    if (!o.common.out.empty()) {
      write_file(o.common.out, payload);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      write_file(o.common.out + ".manifest.json",
                 make_manifest(command, config, o.common.seed, o.common.out, started_utc, wall).dump(2) + "\n");
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
