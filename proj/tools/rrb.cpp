// Command-line experiment runner.
//
//   rrb <toy|pqc|qaoa|bounds> SPEC.json [--key=value ...] [--print-config]
//
// Exit status: 0 success, 1 usage, 2 config error, 3 parse error,
// 4 other library error.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "rrb/core/error.hpp"
#include "rrb/harness/config.hpp"
#include "rrb/harness/experiments.hpp"

namespace {

struct Command {
  std::string spec_path;
  bool print_config = false;
};

int run(rrb::harness::Experiment experiment, const Command& cmd,
        const std::vector<std::string>& overrides) {
  namespace h = rrb::harness;
  try {
    const auto spec = h::load_spec(cmd.spec_path, overrides, experiment);
    if (cmd.print_config) {
      std::cout << spec.resolved.dump(2) << '\n';
      return 0;
    }
    for (const auto& file : h::run_experiment(spec)) std::cout << file.string() << '\n';
    return 0;
  } catch (const rrb::ConfigError& e) {
    std::cerr << "rrb: ConfigError: " << e.what() << '\n';
    return 2;
  } catch (const rrb::ParseError& e) {
    std::cerr << "rrb: ParseError: " << e.what() << '\n';
    return 3;
  } catch (const rrb::Error& e) {
    std::cerr << "rrb: Error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reject-and-Refine continuous bandit experiments"};
  app.require_subcommand(1);

  using rrb::harness::Experiment;
  const std::pair<Experiment, const char*> commands[] = {
      {Experiment::toy, "1-d toy convergence traces"},
      {Experiment::pqc, "PQC local-cost sample complexity to threshold"},
      {Experiment::qaoa, "QAOA MaxCut sample complexity to threshold"},
      {Experiment::bounds, "sample-complexity bounds for piecewise-linear instances"},
  };
  Command cmd;
  std::vector<std::pair<CLI::App*, Experiment>> subs;
  for (auto [experiment, help] : commands) {
    auto* sub = app.add_subcommand(rrb::harness::to_string(experiment), help);
    sub->add_option("spec", cmd.spec_path, "JSON spec file")->required();
    sub->add_flag("--print-config", cmd.print_config, "print the resolved config and exit");
    sub->allow_extras();
    sub->footer("Any config key can be overridden with --key=value, e.g. --rr.epsilon=0.0078125 "
                "or --seeds=0..19.");
    subs.emplace_back(sub, experiment);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  for (auto [sub, experiment] : subs) {
    if (!sub->parsed()) continue;
    const auto extras = sub->remaining();
    for (const auto& arg : extras) {
      if (arg.rfind("--", 0) != 0 || arg.find('=') == std::string::npos) {
        std::cerr << "rrb: ConfigError: unexpected argument \"" << arg
                  << "\"; overrides take the form --key=value\n";
        return 2;
      }
    }
    return run(experiment, cmd, extras);
  }
  return 1;
}
