// ergolab command line: run experiments, summarize their CSVs, cross-check the average kernel.
//
// Exit codes: 0 ok, 1 inequality violation, 2 configuration error, 3 non-convergence.
// Worker threads come from ERGOLAB_WORKERS; outputs do not depend on it.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergolab/ergolab.hpp"

namespace {

using nlohmann::json;

int emit_error(const char* kind, const std::string& message, int code, json extra = json::object()) {
  json e = {{"error", kind}, {"message", message}, {"exit_code", code}};
  e.update(extra);
  std::cerr << e.dump() << '\n';
  return code;
}

template <class Body>
int guarded(Body&& body) {
  using namespace ergolab;
  try {
    return body();
  } catch (const ConvergenceError& e) {
    return emit_error(e.kind(), e.what(), 3,
                      {{"last", {e.last().real(), e.last().imag()}},
                       {"previous", {e.previous().real(), e.previous().imag()}}});
  } catch (const ParseError& e) {
    return emit_error(e.kind(), e.what(), 2, {{"line", e.line()}});
  } catch (const ResonanceError& e) {
    return emit_error(e.kind(), e.what(), 2, {{"frequency", e.frequency()}});
  } catch (const Error& e) {
    return emit_error(e.kind(), e.what(), 2);
  } catch (const std::exception& e) {
    return emit_error("internal", e.what(), 2);
  }
}

int run_and_summarize(const ergolab::lab::ExperimentConfig& config, const std::string& output) {
  const auto art = ergolab::lab::run(config, output);
  for (const auto& w : art.outcome.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "wrote " << art.csv_path << " (" << art.outcome.table.rows.size() << " rows)\n";
  std::cout << "wrote " << art.manifest_path << '\n';
  std::cout << art.outcome.violations << " violations\n";
  return art.outcome.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: numerical laboratory for bilinear ergodic averages on torus flows"};
  app.require_subcommand(1);

  std::string config_path, output, csv_path;
  auto* run_cmd = app.add_subcommand("run", "run the experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("-o,--output", output, "CSV path (overrides the config)");

  auto* report_cmd = app.add_subcommand("report", "summarize a CSV written by run");
  report_cmd->add_option("csv", csv_path, "CSV file")->required();

  auto* xcheck_cmd = app.add_subcommand("oracle-xcheck", "compare the phase kernel with brute quadrature");
  xcheck_cmd->add_option("config", config_path, "config file")->required();
  xcheck_cmd->add_option("-o,--output", output, "CSV path (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run_cmd) return guarded([&] { return run_and_summarize(ergolab::lab::ExperimentConfig::load(config_path), output); });
  if (*report_cmd) return guarded([&] { return ergolab::lab::report_file(csv_path, std::cout); });
  return guarded([&] {
    // The config's own kind is replaced, so any average config can be cross-checked.
    using namespace ergolab::lab;
    std::ifstream in(config_path);
    if (!in) throw ergolab::ConfigError("cannot open config file " + config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ergolab::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    j["kind"] = "oracle-xcheck";
    const auto config = ExperimentConfig::from_json(j);
    std::string out = output;
    if (out.empty() && !config.output.empty()) out = config.output + ".xcheck.csv";
    return run_and_summarize(config, out);
  });
}
