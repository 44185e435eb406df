#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "locfade/cli.hpp"
#include "locfade/errors.hpp"

namespace fs = std::filesystem;
using namespace locfade;

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t trials = 0;
  std::string out = ".";
  std::vector<std::string> emit{"csv", "svg"};
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "scenario document (JSON); defaults apply when omitted")
      ->check(CLI::ExistingFile);
  sub->add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t& s) { o.seed = s; o.seed_set = true; }, "64-bit seed (default 0)");
  sub->add_option("--trials", o.trials, "Monte Carlo trials (default: document or scenario default)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--emit", o.emit, "formats to write: csv, svg")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "svg"}));
}

struct Output {
  fs::path path;
  std::string content;
};

std::vector<Output> render(const ExperimentResult& r, const fs::path& dir, const std::vector<std::string>& emit) {
  std::vector<Output> out;
  const std::string stem = r.experiment;
  for (const auto& e : emit) {
    if (e == "csv") out.push_back({dir / (stem + ".csv"), cli::render_csv(r)});
    if (e == "svg" && !r.rows.empty()) out.push_back({dir / (stem + ".svg"), cli::render_svg(r)});
  }
  out.push_back({dir / (stem + ".meta.json"), cli::render_meta(r)});
  return out;
}

int execute(const std::vector<cli::Experiment>& which, const Options& o) {
  cli::ParsedConfig cfg;
  if (!o.config.empty()) cfg = cli::load_config(o.config);
  const std::uint64_t seed = o.seed_set ? o.seed : cfg.seed.value_or(0);
  const std::size_t trials = o.trials > 0 ? o.trials : cfg.scenario.trials;
  // Everything is computed before the first byte hits disk.
  std::vector<Output> files;
  for (auto e : which) {
    std::fprintf(stderr, "running %s\n", cli::info(e).name);
    const ExperimentResult r = cli::run(e, cfg.scenario, seed, trials);
    for (auto& f : render(r, o.out, o.emit)) files.push_back(std::move(f));
  }
  for (const auto& f : files) cli::write_atomic(f.path, f.content);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream desc;
  desc << "Localization and detection under fading: bounds, estimators, detectors.\n\nExperiments:\n";
  for (const auto& e : cli::experiments()) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-16s %-11s %s\n", e.name, e.figures, e.summary);
    desc << line;
  }
  desc << "  repro-all        all of the above\n";
  CLI::App app{desc.str(), "locfade"};
  app.require_subcommand(1);

  Options opts;
  std::vector<cli::Experiment> which;
  for (const auto& e : cli::experiments()) {
    auto* sub = app.add_subcommand(e.name, std::string(e.figures) + ": " + e.summary);
    add_common(sub, opts);
    sub->callback([&which, id = e.id] { which = {id}; });
  }
  auto* all = app.add_subcommand("repro-all", "run every experiment");
  add_common(all, opts);
  all->callback([&which] {
    which.clear();
    for (const auto& e : cli::experiments()) which.push_back(e.id);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return execute(which, opts);
  } catch (const cli::ParseError& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 2;
  } catch (const cli::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "numeric convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
