// Command-line driver: run, compare and sweep campaigns, show saved traces.

#include "bellopt/campaign.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
namespace h = bellopt::harness;
using nlohmann::json;

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string out;
  bool quiet = false;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "campaign configuration (JSON)")->required();
  cmd->add_option("--seed", c.seed, "override the master seed");
  cmd->add_option("--reps", c.reps, "override the number of repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_flag("--quiet", c.quiet, "print nothing on success");
  cmd->add_option("--threads", c.threads, "worker threads for repetitions (0: all cores)");
}

// Overrides land in the campaign object so they are echoed with it.
json load_with_overrides(const Common& c, bool nested) {
  json j = h::read_json_file(c.config);
  if (!j.is_object()) throw h::ConfigError("<root>", "expected an object");
  json& target = nested ? j["campaign"] : j;
  if (!target.is_object()) throw h::ConfigError("campaign", "expected an object");
  if (c.seed) target["seed"] = *c.seed;
  if (c.reps) target["repetitions"] = *c.reps;
  return j;
}

fs::path output_dir(const Common& c, const json& j, bool nested) {
  if (!c.out.empty()) return c.out;
  const json& src = nested ? j.at("campaign") : j;
  if (src.contains("output") && src["output"].is_string()) return src["output"].get<std::string>();
  return "bellopt-out";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_result(const std::string& label, const h::CampaignResult& r) {
  double realized = 0.0;
  int n = 0;
  for (const auto& run : r.runs) {
    if (std::isfinite(run.realized_value)) {
      realized += run.realized_value;
      ++n;
    }
  }
  std::cout << label << "S_ref " << fmt(r.s_ref) << " (" << h::to_string(r.ref_source) << ")";
  if (!r.aggregate.empty()) {
    const auto& last = r.aggregate.back();
    std::cout << ", final mean delta " << fmt(last.mean_delta) << ", median " << fmt(last.median_delta)
              << ", std " << fmt(last.std_delta) << ", evals " << fmt(last.evals);
  } else {
    std::cout << ", no records";
  }
  if (n > 0) std::cout << ", noise-free value at best knobs " << fmt(realized / n);
  std::cout << "\n";
}

int cmd_run(const Common& c) {
  const json j = load_with_overrides(c, false);
  const h::Campaign campaign = h::parse_campaign(j);
  const fs::path dir = output_dir(c, j, false);
  const h::CampaignResult r = h::run_campaign(campaign, {c.threads});
  h::write_campaign_outputs(campaign, r, dir);
  if (!c.quiet) {
    print_result("", r);
    std::cout << "wrote " << (dir / "aggregate.csv").string() << " and "
              << (dir / "traces.json").string() << "\n";
  }
  return 0;
}

int cmd_compare(const Common& c) {
  const json j = load_with_overrides(c, true);
  const h::ComparisonPlan plan = h::parse_comparison(j);
  const fs::path dir = output_dir(c, j, true);
  const h::Comparison cmp = h::compare_optimizers(plan, {c.threads});
  h::write_comparison_outputs(cmp, dir);
  for (const auto& e : cmp.entries) {
    h::write_campaign_outputs(plan.campaigns.at(&e - cmp.entries.data()), e.result, dir / e.label);
  }
  if (!c.quiet) {
    std::cout << "budget " << cmp.budget << " evaluations\n";
    for (const auto& r : cmp.ranking) {
      std::cout << "  " << r.rank << ". " << r.label << "  median final delta "
                << fmt(r.median_final_delta) << ", mean " << fmt(r.mean_final_delta)
                << (r.tied ? "  (tie)" : "") << "\n";
    }
    std::cout << "wrote " << (dir / "ranking.json").string() << "\n";
  }
  return 0;
}

int cmd_sweep(const Common& c) {
  const json j = load_with_overrides(c, true);
  const h::SweepPlan plan = h::parse_sweep(j);
  const fs::path dir = output_dir(c, j, true);
  const h::SweepResult r = h::run_sweep(plan, {c.threads});
  h::write_sweep_outputs(plan, r, dir);
  if (!c.quiet) {
    for (std::size_t i = 0; i < plan.values.size(); ++i) {
      print_result(plan.parameter + "=" + fmt(plan.values[i]) + ": ", r.results[i]);
    }
    std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";
  }
  return 0;
}

void show_trace(const bellopt::snm::RunTrace& t, double sign) {
  std::cout << "  records " << t.records.size() << ", evaluations " << t.evaluations;
  if (!t.records.empty()) std::cout << ", best value " << fmt(sign * t.best_cost);
  std::cout << "\n";
}

int cmd_show(const std::string& path, bool full) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    const auto series = h::read_csv(path);
    std::cout << h::kCsvHeader << "\n";
    const std::size_t step = full || series.size() <= 20 ? 1 : series.size() / 10;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (i % step && i + 1 != series.size()) continue;
      const auto& r = series[i];
      std::cout << r.iteration << "," << fmt(r.mean_delta) << "," << fmt(r.median_delta) << ","
                << fmt(r.std_delta) << "," << fmt(r.evals) << "\n";
    }
    return 0;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const json doc = json::parse(in);
  const std::string schema = doc.value("schema", "");
  std::cout << "schema " << schema << "\n";
  if (doc.contains("config")) std::cout << "config " << doc["config"].dump() << "\n";
  if (schema == "bellopt-trace/1") {
    show_trace(h::trace_from_json(doc.at("trace")), 1.0);
  } else if (schema == "bellopt-campaign/1") {
    std::cout << "S_ref " << fmt(doc.at("s_ref").get<double>()) << " ("
              << doc.at("s_ref_source").get<std::string>() << ")\n";
    for (const auto& run : doc.at("runs")) {
      std::cout << "run " << run.at("repetition").get<int>() << ":";
      const auto t = h::trace_from_json(run.at("trace"));
      show_trace(t, -1.0);
    }
  } else if (schema == "bellopt-comparison/1") {
    for (const auto& r : doc.at("ranking")) {
      std::cout << "  " << r.at("rank").get<int>() << ". " << r.at("label").get<std::string>()
                << "  median final delta " << r.at("median_final_delta").dump()
                << (r.at("tied").get<bool>() ? "  (tie)" : "") << "\n";
    }
  } else {
    throw std::runtime_error(path + ": unrecognised file");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box maximization of Bell violations with stochastic Nelder-Mead"};
  app.require_subcommand(1);

  Common run_opts, cmp_opts, sweep_opts;
  auto* run = app.add_subcommand("run", "run one campaign");
  add_common(run, run_opts);
  auto* compare = app.add_subcommand("compare", "compare optimizers on a shared oracle and budget");
  add_common(compare, cmp_opts);
  auto* sweep = app.add_subcommand("sweep", "run a campaign over a grid of gamma, events or k");
  add_common(sweep, sweep_opts);
  std::string show_path;
  bool show_full = false;
  auto* show = app.add_subcommand("show", "pretty-print a trace, campaign, ranking or CSV file");
  show->add_option("path", show_path, "file to show")->required();
  show->add_flag("--full", show_full, "print every CSV row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*compare) return cmd_compare(cmp_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    return cmd_show(show_path, show_full);
  } catch (const h::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
