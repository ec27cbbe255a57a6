#include "berkhyb/error.hpp"
#include "berkhyb/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Hybrid and non-archimedean pluripotential experiments"};
  app.require_subcommand(1, 1);
  std::string manifest, out;
  std::uint64_t seed = 0;
  int threads = 1;
  for (auto& kind : berkhyb::experiment_kinds()) {
    CLI::App* sub = app.add_subcommand(kind, "run a " + kind + " manifest");
    sub->add_option("--manifest", manifest, "manifest JSON")->required();
    sub->add_option("--out", out, "output directory (default: $BERKHYB_OUT or ./berkhyb_out)");
    sub->add_option("--seed", seed, "override the manifest seed");
    sub->add_option("--threads", threads, "worker threads for parameter sweeps")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  std::string kind = app.get_subcommands().front()->get_name();
  bool seed_given = app.get_subcommands().front()->count("--seed") > 0;
  if (out.empty()) {
    const char* env = std::getenv("BERKHYB_OUT");
    out = env && *env ? env : "berkhyb_out";
  }

  auto start = std::chrono::steady_clock::now();
  berkhyb::RunOptions opts;
  if (seed_given) opts.seed = seed;
  opts.threads = threads;
  berkhyb::RunReport report;
  try {
    report = berkhyb::run_manifest(manifest, kind, opts);
  } catch (const berkhyb::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const berkhyb::UnsupportedRepresentationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const berkhyb::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
  try {
    berkhyb::write_outputs(report, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << kind << ": " << (report.passed ? "PASS" : "FAIL") << " -> " << out << "\n";
  if (!report.passed)
    for (auto& c : report.json["checks"])
      if (!c["passed"].get<bool>())
        std::cout << "  failed: " << c["name"].get<std::string>()
                  << (c.contains("detail") ? " (" + c["detail"].get<std::string>() + ")" : "") << "\n";
  std::cerr << "wall-clock: " << secs << " s\n";
  return report.passed ? 0 : 1;
}
