#include "bellopt/campaign.hpp"

#include "bellopt/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace bellopt::harness {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Reads fields of one JSON object and rejects keys nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  std::string path(const std::string& key) const { return join(path_, key); }
  const std::string& where() const { return path_; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key), "expected a finite number");
    return d;
  }

  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_number_integer()) return v.get<long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long>(d);
    }
    throw ConfigError(path(key), "expected an integer");
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
    throw ConfigError(path(key), "expected a non-negative integer");
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(path(item.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

StateSpec parse_state(const json& j) {
  Fields f(j, "state");
  StateSpec s;
  const std::string kind = f.string("kind", "pure");
  s.gamma = f.number("gamma", std::numbers::pi / 4.0);
  if (kind == "pure") {
    s.kind = StateSpec::Kind::pure;
    s.phi = f.number("phi", 0.0);
  } else if (kind == "noisy") {
    s.kind = StateSpec::Kind::noisy;
    s.p = f.number("p", 1.0);
    s.lambda = f.number("lambda", 0.0);
    if (s.p < 0.0 || s.p > 1.0) throw ConfigError(f.path("p"), "must lie in [0, 1]");
    if (s.lambda < 0.0 || s.lambda > 1.0) throw ConfigError(f.path("lambda"), "must lie in [0, 1]");
  } else {
    throw ConfigError(f.path("kind"), "expected \"pure\" or \"noisy\", got \"" + kind + "\"");
  }
  f.finish();
  return s;
}

bell::Inequality parse_inequality(const json& j) {
  Fields f(j, "inequality");
  const std::string type = f.string("type", "chsh");
  bell::Inequality ineq;
  if (type == "chsh") {
    ineq = bell::Chsh{};
  } else if (type == "chained") {
    const long k = f.integer("k", 2);
    if (k < 2 || k > 64) throw ConfigError(f.path("k"), "must lie in [2, 64]");
    ineq = bell::Chained{static_cast<int>(k)};
  } else if (type == "tilted") {
    bell::Tilted t;
    t.alpha = f.number("alpha", 1.0);
    t.beta = f.number("beta", 0.0);
    if (t.alpha < 1.0) throw ConfigError(f.path("alpha"), "must be >= 1");
    if (t.beta < 0.0) throw ConfigError(f.path("beta"), "must be >= 0");
    ineq = t;
  } else if (type == "tlm") {
    ineq = bell::Tlm{};
  } else {
    throw ConfigError(f.path("type"), "unknown inequality \"" + type + "\"");
  }
  f.finish();
  return ineq;
}

oracle::NoiseModel parse_noise(const json& j, const std::string& path) {
  Fields f(j, path);
  const std::string kind = f.string("kind", "exact");
  oracle::NoiseModel n;
  if (kind == "exact") {
    n = oracle::NoiseModel::exact();
  } else if (kind == "poisson" || kind == "poisson_gaussian") {
    if (!f.has("events")) throw ConfigError(f.path("events"), "required for " + kind + " noise");
    const double events = f.number("events", 0.0);
    if (!(events >= 1.0)) throw ConfigError(f.path("events"), "must be >= 1");
    if (kind == "poisson") {
      n = oracle::NoiseModel::poisson(events);
    } else {
      const double sigma = f.number("sigma", 0.0);
      if (sigma < 0.0) throw ConfigError(f.path("sigma"), "must be >= 0");
      n = oracle::NoiseModel::poisson_gaussian(events, sigma);
    }
  } else {
    throw ConfigError(f.path("kind"), "expected exact, poisson or poisson_gaussian");
  }
  f.finish();
  return n;
}

struct OracleFields {
  oracle::Response response = oracle::Response::identity;
  bool theta_only = false;
  bool required_pairs_only = true;
  oracle::NoiseModel noise;
};

OracleFields parse_oracle(const json& j) {
  Fields f(j, "oracle");
  OracleFields o;
  const std::string response = f.string("response", "identity");
  const auto r = oracle::parse_response(response);
  if (!r) throw ConfigError(f.path("response"), "unknown response \"" + response + "\"");
  o.response = *r;
  o.theta_only = f.boolean("theta_only", false);
  o.required_pairs_only = f.boolean("required_pairs_only", true);
  if (f.has("noise")) o.noise = parse_noise(f.raw("noise"), f.path("noise"));
  f.finish();
  return o;
}

snm::SnmConfig parse_snm(Fields& f) {
  snm::SnmConfig c;
  c.reflection = f.number("reflection", c.reflection);
  c.contraction = f.number("contraction", c.contraction);
  c.expansion = f.number("expansion", c.expansion);
  c.ars_radius = f.number("ars_radius", c.ars_radius);
  c.ars_max_tries = static_cast<int>(f.integer("ars_max_tries", c.ars_max_tries));
  c.max_iterations = f.integer("max_iterations", c.max_iterations);
  c.max_evaluations = f.integer("max_evaluations", c.max_evaluations);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(f.where(), e.what());
  }
  return c;
}

OptimizerSpec parse_optimizer_fields(Fields& f) {
  const std::string type = f.string("type", "snm");
  if (type == "snm") return SnmOptimizer{parse_snm(f)};
  if (type == "grid") {
    const long n = f.integer("samples_per_dim", 3);
    if (n < 2) throw ConfigError(f.path("samples_per_dim"), "must be >= 2");
    return GridOptimizer{static_cast<int>(n)};
  }
  if (type == "random") {
    const long b = f.integer("budget", 0);
    if (b < 0) throw ConfigError(f.path("budget"), "must be >= 0");
    return RandomOptimizer{b};
  }
  throw ConfigError(f.path("type"), "expected snm, grid or random");
}

OptimizerSpec parse_optimizer(const json& j, const std::string& path) {
  Fields f(j, path);
  OptimizerSpec spec = parse_optimizer_fields(f);
  f.finish();
  return spec;
}

std::vector<double> bound_vector(const json& v, std::size_t dim, const std::string& path) {
  if (v.is_number()) return std::vector<double>(dim, v.get<double>());
  if (!v.is_array()) throw ConfigError(path, "expected a number or an array");
  if (v.size() != dim) {
    throw ConfigError(path, "has " + std::to_string(v.size()) + " entries, knob dimension is " +
                                std::to_string(dim));
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(path, "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

snm::Box default_box(oracle::Response f, std::size_t dim) {
  const auto [lo, hi] = default_knob_range(f);
  return snm::Box::uniform(dim, lo, hi);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(int n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(1, n)));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

quantum::DensityMatrix StateSpec::build() const {
  if (kind == Kind::pure) return quantum::make_pure_state(gamma, phi);
  return quantum::make_noisy_state(p, lambda, gamma);
}

std::string optimizer_name(const OptimizerSpec& spec) {
  switch (spec.index()) {
    case 0: return "snm";
    case 1: return "grid";
    default: return "random";
  }
}

std::size_t Campaign::knob_dimension() const { return oracle::knob_count(oracle_config(0)); }

oracle::OracleConfig Campaign::oracle_config(std::uint64_t oracle_seed) const {
  oracle::OracleConfig cfg;
  cfg.state = state.build();
  cfg.settings_per_party = bell::settings_per_party(inequality);
  cfg.response = response;
  cfg.theta_only = theta_only;
  cfg.noise = noise;
  cfg.rng_seed = oracle_seed;
  if (required_pairs_only) cfg.measured_pairs = bell::required_pairs(inequality);
  return cfg;
}

std::pair<double, double> default_knob_range(oracle::Response f) {
  switch (f) {
    case oracle::Response::identity: return {0.0, 2.0 * std::numbers::pi};
    case oracle::Response::osc: return {-0.1, 0.1};
    case oracle::Response::logi: return {-5.0, 5.0};
    case oracle::Response::sinh: return {-3.0, 3.0};
  }
  return {0.0, 2.0 * std::numbers::pi};
}

Campaign parse_campaign(const json& j) {
  Fields f(j, "");
  Campaign c;
  if (f.has("state")) c.state = parse_state(f.raw("state"));
  if (f.has("inequality")) c.inequality = parse_inequality(f.raw("inequality"));
  if (f.has("oracle")) {
    const OracleFields o = parse_oracle(f.raw("oracle"));
    c.response = o.response;
    c.theta_only = o.theta_only;
    c.required_pairs_only = o.required_pairs_only;
    c.noise = o.noise;
  }
  if (f.has("optimizer")) c.optimizer = parse_optimizer(f.raw("optimizer"), "optimizer");
  const long reps = f.integer("repetitions", 1);
  if (reps < 1) throw ConfigError("repetitions", "must be >= 1");
  c.repetitions = static_cast<int>(reps);
  c.seed = f.unsigned_integer("seed", 0);
  if (f.has("s_ref")) c.s_ref = f.number("s_ref", 0.0);
  f.string("output", "");  // consumed by the CLI

  const std::size_t dim = c.knob_dimension();
  c.box = default_box(c.response, dim);
  if (f.has("box")) {
    Fields b(f.raw("box"), "box");
    std::vector<double> lo = c.box.lower(), hi = c.box.upper();
    if (b.has("lower")) lo = bound_vector(b.raw("lower"), dim, "box.lower");
    if (b.has("upper")) hi = bound_vector(b.raw("upper"), dim, "box.upper");
    b.finish();
    for (std::size_t i = 0; i < dim; ++i) {
      if (!(lo[i] < hi[i])) throw ConfigError("box", "lower must be below upper in every coordinate");
    }
    c.box = snm::Box(lo, hi);
  }
  f.finish();
  c.source = j;
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open configuration file");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), e.what());
  }
}

Campaign load_campaign(const std::filesystem::path& path) {
  return parse_campaign(read_json_file(path));
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

RepetitionSeeds repetition_seeds(std::uint64_t master, int repetition) {
  std::uint64_t state = master ^ (0xd1b54a32d192ed03ULL * (static_cast<std::uint64_t>(repetition) + 1));
  RepetitionSeeds s;
  s.optimizer = splitmix64(state);
  s.oracle = splitmix64(state);
  return s;
}

std::string to_string(RefSource s) {
  switch (s) {
    case RefSource::horodecki: return "horodecki";
    case RefSource::numeric_max: return "numeric-max";
    case RefSource::supplied: return "supplied";
  }
  return "supplied";
}

std::pair<double, RefSource> reference_value(const Campaign& c) {
  if (c.s_ref) return {*c.s_ref, RefSource::supplied};
  const quantum::DensityMatrix rho = c.state.build();
  if (std::holds_alternative<bell::Chsh>(c.inequality)) {
    return {quantum::horodecki_chsh_max(rho), RefSource::horodecki};
  }
  return {bell::numeric_quantum_max(c.inequality, rho).value, RefSource::numeric_max};
}

std::vector<AggregateRecord> aggregate(const std::vector<snm::RunTrace>& traces, double s_ref) {
  std::size_t length = 0;
  for (const auto& t : traces) length = std::max(length, t.records.size());
  std::vector<AggregateRecord> out;
  out.reserve(length);
  std::vector<double> deltas;
  for (std::size_t i = 0; i < length; ++i) {
    deltas.clear();
    double evals = 0.0;
    for (const auto& t : traces) {
      if (t.records.empty()) continue;
      const auto& r = t.records[std::min(i, t.records.size() - 1)];
      deltas.push_back(std::abs(s_ref - (-r.best_cost)));
      evals += static_cast<double>(r.evaluations);
    }
    AggregateRecord a;
    a.iteration = static_cast<long>(i) + 1;
    a.mean_delta = mean_of(deltas);
    a.median_delta = median_of(deltas);
    a.std_delta = sample_std(deltas, a.mean_delta);
    a.evals = evals / static_cast<double>(deltas.size());
    out.push_back(a);
  }
  return out;
}

std::optional<double> best_value_at_evaluation(const snm::RunTrace& trace, long evaluations) {
  // Records are ordered by evaluations; find the last one not exceeding it.
  auto it = std::upper_bound(trace.records.begin(), trace.records.end(), evaluations,
                             [](long e, const snm::TraceRecord& r) { return e < r.evaluations; });
  if (it == trace.records.begin()) return std::nullopt;
  return -std::prev(it)->best_cost;
}

CampaignResult run_campaign(const Campaign& c, const RunOptions& opts) {
  CampaignResult result;
  std::tie(result.s_ref, result.ref_source) = reference_value(c);
  result.runs.resize(static_cast<std::size_t>(c.repetitions));

  parallel_for(c.repetitions, opts.threads, [&](int rep) {
    RunResult& run = result.runs[static_cast<std::size_t>(rep)];
    run.repetition = rep;
    run.seeds = repetition_seeds(c.seed, rep);
    oracle::BellOracle oracle(c.oracle_config(run.seeds.oracle));
    const snm::CostFunction cost = [&](std::span<const double> t) {
      return -bell::value(c.inequality, oracle.evaluate(t));
    };
    run.trace = std::visit(
        [&](const auto& opt) -> snm::RunTrace {
          using T = std::decay_t<decltype(opt)>;
          if constexpr (std::is_same_v<T, SnmOptimizer>) {
            snm::SnmConfig cfg = opt.config;
            cfg.seed = run.seeds.optimizer;
            return snm::minimize(cost, c.box, cfg);
          } else if constexpr (std::is_same_v<T, GridOptimizer>) {
            return snm::grid_search(cost, c.box, opt.samples_per_dim, run.seeds.optimizer);
          } else {
            return snm::random_search(cost, c.box, opt.budget, run.seeds.optimizer);
          }
        },
        c.optimizer);
    if (!run.trace.records.empty()) {
      run.final_delta = std::abs(result.s_ref + run.trace.best_cost);
      run.realized_value =
          bell::value(c.inequality, oracle.evaluate_exact(run.trace.best_knobs));
    } else {
      run.final_delta = std::numeric_limits<double>::quiet_NaN();
      run.realized_value = std::numeric_limits<double>::quiet_NaN();
    }
  });

  std::vector<snm::RunTrace> traces;
  traces.reserve(result.runs.size());
  for (const auto& r : result.runs) traces.push_back(r.trace);
  result.aggregate = aggregate(traces, result.s_ref);
  return result;
}

// Persistence -------------------------------------------------------------

void emit_csv(const std::vector<AggregateRecord>& series, const std::filesystem::path& path) {
  std::string text = std::string(kCsvHeader) + "\n";
  for (const auto& r : series) {
    text += std::to_string(r.iteration) + "," + format_double(r.mean_delta) + "," +
            format_double(r.median_delta) + "," + format_double(r.std_delta) + "," +
            format_double(r.evals) + "\n";
  }
  write_text(path, text);
}

std::vector<AggregateRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error(path.string() + ": missing or unexpected CSV header");
  }
  std::vector<AggregateRecord> out;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 5) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 5 columns");
    }
    try {
      AggregateRecord r;
      r.iteration = std::stol(cells[0]);
      r.mean_delta = std::stod(cells[1]);
      r.median_delta = std::stod(cells[2]);
      r.std_delta = std::stod(cells[3]);
      r.evals = std::stod(cells[4]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

json trace_to_json(const snm::RunTrace& trace) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back({{"iteration", r.iteration},
                       {"best_cost", r.best_cost},
                       {"evaluations", r.evaluations},
                       {"best_knobs", r.best_knobs}});
  }
  return {{"best_cost", trace.best_cost},
          {"best_knobs", trace.best_knobs},
          {"evaluations", trace.evaluations},
          {"records", std::move(records)}};
}

snm::RunTrace trace_from_json(const json& j) {
  snm::RunTrace t;
  try {
    t.best_cost = j.at("best_cost").get<double>();
    t.best_knobs = j.at("best_knobs").get<std::vector<double>>();
    t.evaluations = j.at("evaluations").get<long>();
    for (const auto& r : j.at("records")) {
      t.records.push_back({r.at("iteration").get<long>(), r.at("best_cost").get<double>(),
                           r.at("evaluations").get<long>(),
                           r.at("best_knobs").get<std::vector<double>>()});
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed trace: ") + e.what());
  }
  return t;
}

void emit_json(const snm::RunTrace& trace, const json& config, const std::filesystem::path& path) {
  const json doc = {{"schema", "bellopt-trace/1"}, {"config", config}, {"trace", trace_to_json(trace)}};
  write_text(path, canonical_dump(doc));
}

std::pair<snm::RunTrace, json> read_json_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  if (doc.value("schema", "") != "bellopt-trace/1") {
    throw std::runtime_error(path.string() + ": not a single-trace file");
  }
  return {trace_from_json(doc.at("trace")), doc.at("config")};
}

namespace {

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_campaign_outputs(const Campaign& c, const CampaignResult& r,
                            const std::filesystem::path& dir) {
  emit_csv(r.aggregate, dir / "aggregate.csv");
  json runs = json::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"repetition", run.repetition},
                    {"optimizer_seed", run.seeds.optimizer},
                    {"oracle_seed", run.seeds.oracle},
                    {"final_delta", nullable(run.final_delta)},
                    {"realized_value", nullable(run.realized_value)},
                    {"trace", trace_to_json(run.trace)}});
  }
  const json doc = {{"schema", "bellopt-campaign/1"},
                    {"config", c.source},
                    {"s_ref", r.s_ref},
                    {"s_ref_source", to_string(r.ref_source)},
                    {"runs", std::move(runs)}};
  // Compact: traces carry every record's knobs.
  write_text(dir / "traces.json", doc.dump() + "\n");
}

// Comparison --------------------------------------------------------------

long evaluation_budget(const OptimizerSpec& spec, std::size_t dim) {
  if (const auto* s = std::get_if<SnmOptimizer>(&spec)) return s->config.max_evaluations;
  if (const auto* g = std::get_if<GridOptimizer>(&spec)) {
    const double n = std::pow(static_cast<double>(g->samples_per_dim), static_cast<double>(dim));
    return n > 1e15 ? std::numeric_limits<long>::max() : static_cast<long>(n);
  }
  return std::get<RandomOptimizer>(spec).budget;
}

std::vector<RankedOptimizer> rank_optimizers(
    std::vector<std::pair<std::string, std::vector<double>>> final_deltas) {
  std::vector<RankedOptimizer> out;
  for (auto& [label, deltas] : final_deltas) {
    RankedOptimizer r;
    r.label = label;
    r.mean_final_delta = mean_of(deltas);
    r.median_final_delta = median_of(deltas);
    r.final_deltas = std::move(deltas);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.median_final_delta < b.median_final_delta;
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool same_as_prev = i > 0 && out[i].median_final_delta == out[i - 1].median_final_delta;
    out[i].rank = same_as_prev ? out[i - 1].rank : static_cast<int>(i) + 1;
    if (same_as_prev) out[i].tied = out[i - 1].tied = true;
  }
  return out;
}

ComparisonPlan parse_comparison(const json& j) {
  Fields f(j, "");
  if (!f.has("campaign")) throw ConfigError("campaign", "required");
  if (!f.has("optimizers")) throw ConfigError("optimizers", "required");
  const json& base = f.raw("campaign");
  const json& list = f.raw("optimizers");
  f.string("output", "");
  f.finish();
  if (!base.is_object()) throw ConfigError("campaign", "expected an object");
  if (base.contains("optimizer")) {
    throw ConfigError("campaign.optimizer", "set optimizers in the top-level list instead");
  }
  if (!list.is_array() || list.empty()) {
    throw ConfigError("optimizers", "expected a non-empty array");
  }

  ComparisonPlan plan;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "optimizers[" + std::to_string(i) + "]";
    if (!list[i].is_object()) throw ConfigError(path, "expected an object");
    json opt = list[i];
    std::string label = opt.value("label", opt.value("type", std::string("snm")));
    opt.erase("label");
    if (!labels.insert(label).second) throw ConfigError(path + ".label", "duplicate label " + label);
    json cj = base;
    cj["optimizer"] = opt;
    Campaign c;
    try {
      c = parse_campaign(cj);
    } catch (const ConfigError& e) {
      const std::string& fld = e.field();
      if (fld.rfind("optimizer", 0) == 0) {
        throw ConfigError(path + fld.substr(9), std::string(e.what()).substr(fld.size() + 2));
      }
      throw ConfigError("campaign." + fld, std::string(e.what()).substr(fld.size() + 2));
    }
    c.source = j;
    plan.labels.push_back(std::move(label));
    plan.campaigns.push_back(std::move(c));
  }
  return plan;
}

Comparison compare_optimizers(const ComparisonPlan& plan, const RunOptions& opts) {
  if (plan.campaigns.empty()) throw ConfigError("optimizers", "nothing to compare");
  if (plan.labels.size() != plan.campaigns.size()) {
    throw std::invalid_argument("comparison labels and campaigns differ in number");
  }
  Comparison cmp;
  const Campaign& first = plan.campaigns.front();
  cmp.config = first.source;
  const std::size_t dim = first.knob_dimension();
  cmp.budget = evaluation_budget(first.optimizer, dim);
  for (std::size_t i = 0; i < plan.campaigns.size(); ++i) {
    const Campaign& c = plan.campaigns[i];
    const std::string path = "optimizers[" + std::to_string(i) + "]";
    const long b = evaluation_budget(c.optimizer, c.knob_dimension());
    if (b <= 0) {
      throw ConfigError(path, "needs a finite evaluation budget (max_evaluations for snm)");
    }
    if (b != cmp.budget) {
      throw ConfigError(path, "evaluation budget " + std::to_string(b) + " differs from " +
                                  std::to_string(cmp.budget));
    }
    if (c.seed != first.seed || c.repetitions != first.repetitions ||
        c.knob_dimension() != dim || c.noise.kind != first.noise.kind ||
        c.noise.events != first.noise.events || c.noise.sigma != first.noise.sigma ||
        c.response != first.response || c.inequality.index() != first.inequality.index()) {
      throw ConfigError(path, "entries must share the oracle, seed and repetitions");
    }
  }

  std::vector<std::pair<std::string, std::vector<double>>> finals;
  for (std::size_t i = 0; i < plan.campaigns.size(); ++i) {
    ComparisonEntry e{plan.labels[i], run_campaign(plan.campaigns[i], opts)};
    std::vector<double> d;
    for (const auto& r : e.result.runs) d.push_back(r.final_delta);
    finals.emplace_back(e.label, std::move(d));
    cmp.entries.push_back(std::move(e));
  }
  cmp.ranking = rank_optimizers(std::move(finals));
  return cmp;
}

std::vector<EvaluationCurvePoint> evaluation_curve(const CampaignResult& r, long budget) {
  std::vector<EvaluationCurvePoint> out;
  std::vector<double> deltas;
  for (long e = 1; e <= budget; ++e) {
    deltas.clear();
    bool complete = true;
    for (const auto& run : r.runs) {
      const auto v = best_value_at_evaluation(run.trace, e);
      if (!v) {
        complete = false;
        break;
      }
      deltas.push_back(std::abs(r.s_ref - *v));
    }
    if (!complete || deltas.empty()) continue;
    out.push_back({e, mean_of(deltas), median_of(deltas)});
  }
  return out;
}

void write_comparison_outputs(const Comparison& cmp, const std::filesystem::path& dir) {
  json ranking = json::array();
  for (const auto& r : cmp.ranking) {
    json deltas = json::array();
    for (double d : r.final_deltas) deltas.push_back(nullable(d));
    ranking.push_back({{"label", r.label},
                       {"rank", r.rank},
                       {"tied", r.tied},
                       {"mean_final_delta", nullable(r.mean_final_delta)},
                       {"median_final_delta", nullable(r.median_final_delta)},
                       {"final_deltas", std::move(deltas)}});
  }
  json doc = {{"schema", "bellopt-comparison/1"},
              {"config", cmp.config},
              {"budget", cmp.budget},
              {"ranking", std::move(ranking)}};
  write_text(dir / "ranking.json", canonical_dump(doc));

  std::string curves = "label,evaluation,mean_delta,median_delta\n";
  for (const auto& e : cmp.entries) {
    for (const auto& p : evaluation_curve(e.result, cmp.budget)) {
      curves += e.label + "," + std::to_string(p.evaluation) + "," + format_double(p.mean_delta) +
                "," + format_double(p.median_delta) + "\n";
    }
  }
  write_text(dir / "curves.csv", curves);
}

// Sweeps -------------------------------------------------------------------

SweepPlan parse_sweep(const json& j) {
  Fields f(j, "");
  if (!f.has("campaign")) throw ConfigError("campaign", "required");
  if (!f.has("sweep")) throw ConfigError("sweep", "required");
  const json& base = f.raw("campaign");
  Fields s(f.raw("sweep"), "sweep");
  f.string("output", "");
  f.finish();
  if (!base.is_object()) throw ConfigError("campaign", "expected an object");

  SweepPlan plan;
  plan.parameter = s.string("parameter", "");
  if (plan.parameter != "gamma" && plan.parameter != "events" && plan.parameter != "k") {
    throw ConfigError("sweep.parameter", "expected gamma, events or k");
  }
  if (!s.has("values") || !s.raw("values").is_array() || s.raw("values").empty()) {
    throw ConfigError("sweep.values", "expected a non-empty array of numbers");
  }
  for (const auto& v : s.raw("values")) {
    if (!v.is_number()) throw ConfigError("sweep.values", "expected numbers");
    plan.values.push_back(v.get<double>());
  }
  s.finish();

  for (std::size_t i = 0; i < plan.values.size(); ++i) {
    json cj = base;
    const double v = plan.values[i];
    if (plan.parameter == "gamma") {
      if (!cj.contains("state")) cj["state"] = json::object();
      cj["state"]["gamma"] = v;
    } else if (plan.parameter == "events") {
      if (!cj.contains("oracle")) cj["oracle"] = json::object();
      if (!cj["oracle"].contains("noise")) cj["oracle"]["noise"] = {{"kind", "poisson"}};
      cj["oracle"]["noise"]["events"] = v;
    } else {
      if (std::floor(v) != v) throw ConfigError("sweep.values", "k must be an integer");
      cj["inequality"] = {{"type", "chained"}, {"k", static_cast<long>(v)}};
    }
    try {
      Campaign c = parse_campaign(cj);
      c.source = cj;
      plan.campaigns.push_back(std::move(c));
    } catch (const ConfigError& e) {
      const std::string& fld = e.field();
      throw ConfigError("campaign." + fld, std::string(e.what()).substr(fld.size() + 2) +
                                               " (sweep value " + format_double(v) + ")");
    }
  }
  return plan;
}

SweepResult run_sweep(const SweepPlan& plan, const RunOptions& opts) {
  SweepResult r;
  for (const auto& c : plan.campaigns) r.results.push_back(run_campaign(c, opts));
  return r;
}

void write_sweep_outputs(const SweepPlan& plan, const SweepResult& r,
                         const std::filesystem::path& dir) {
  std::string text = plan.parameter +
                     ",s_ref,final_mean_delta,final_median_delta,final_std_delta,final_evals\n";
  for (std::size_t i = 0; i < plan.campaigns.size(); ++i) {
    const CampaignResult& res = r.results.at(i);
    const std::string v = format_double(plan.values[i]);
    AggregateRecord last;
    last.mean_delta = last.median_delta = std::numeric_limits<double>::quiet_NaN();
    if (!res.aggregate.empty()) last = res.aggregate.back();
    text += v + "," + format_double(res.s_ref) + "," + format_double(last.mean_delta) + "," +
            format_double(last.median_delta) + "," + format_double(last.std_delta) + "," +
            format_double(last.evals) + "\n";
    write_campaign_outputs(plan.campaigns[i], res, dir / (plan.parameter + "=" + v));
  }
  write_text(dir / "sweep.csv", text);
}

}  // namespace bellopt::harness
