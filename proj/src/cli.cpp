#include "qhd/cli.hpp"

#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "qhd/config.hpp"
#include "qhd/ess_analyzer.hpp"
#include "qhd/evo_dynamics.hpp"
#include "qhd/report.hpp"
#include "qhd/sweep.hpp"
#include "qhd/verify.hpp"

namespace qhd {
namespace {

// Exit-2 failures raised while assembling the run configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format;
};

struct GameOptions {
  std::optional<double> resource_value, injury_cost, display_cost, losing_cost;
  bool no_strict_signs = false;
};

struct StateOptions {
  std::optional<std::string> hh, dd, hd, dh;
  std::optional<std::string> policy;
  std::optional<double> p, q;
  std::optional<double> tol;
};

struct SweepOptions {
  std::optional<std::string> x, y;
  std::optional<std::size_t> resolution;
  std::optional<double> split;
};

struct SimulateOptions {
  std::optional<double> incumbent, mutant, incumbent_col, mutant_col;
  std::optional<double> epsilon, step_size, extinction_threshold;
  std::optional<std::size_t> generations;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Configuration file");
  cmd->add_option("--out", o.out_path, "Write output to PATH instead of standard output");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
}

void add_game(CLI::App* cmd, GameOptions& o) {
  cmd->add_option("--resource-value", o.resource_value, "Value of the resource (v)");
  cmd->add_option("--injury-cost", o.injury_cost, "Cost of injury (i)");
  cmd->add_option("--display-cost", o.display_cost, "Cost of display (d)");
  cmd->add_option("--losing-cost", o.losing_cost, "Payoff to the loser of a Hawk/Dove contest");
  cmd->add_flag("--no-strict-signs", o.no_strict_signs, "Accept any sign for v, i and d");
}

void add_state(CLI::App* cmd, StateOptions& o) {
  cmd->add_option("--hh", o.hh, "Amplitude of |HH> (numeric expression)");
  cmd->add_option("--dd", o.dd, "Amplitude of |DD>");
  cmd->add_option("--hd", o.hd, "Amplitude of |HD>");
  cmd->add_option("--dh", o.dh, "Amplitude of |DH>");
  cmd->add_option("--policy", o.policy, "Normalization policy")->check(CLI::IsMember({"reject", "renormalize"}));
}

double number_arg(const std::string& text, const char* flag) {
  try {
    return evaluate_number(text);
  } catch (const ConfigError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

// Loads --config (if any) and applies flag overrides.
RunConfig build_config(const CommonOptions& common, const GameOptions& game, const StateOptions* state) {
  RunConfig config;
  const bool have_config = !common.config_path.empty();
  if (have_config) {
    config = load_config(common.config_path);
  } else if (!game.resource_value || !game.injury_cost || !game.display_cost) {
    throw UsageError(
        "either --config or all of --resource-value, --injury-cost and --display-cost are required");
  }
  if (game.resource_value) config.game.params.resource_value = *game.resource_value;
  if (game.injury_cost) config.game.params.injury_cost = *game.injury_cost;
  if (game.display_cost) config.game.params.display_cost = *game.display_cost;
  if (game.losing_cost) config.game.params.losing_cost = *game.losing_cost;
  if (game.no_strict_signs) config.game.strict_signs = false;

  if (state) {
    if (state->hh || state->dd || state->hd || state->dh) {
      config.state.amplitudes = {};
      if (state->hh) config.state.amplitudes.hh = number_arg(*state->hh, "--hh");
      if (state->dd) config.state.amplitudes.dd = number_arg(*state->dd, "--dd");
      if (state->hd) config.state.amplitudes.hd = number_arg(*state->hd, "--hd");
      if (state->dh) config.state.amplitudes.dh = number_arg(*state->dh, "--dh");
    }
    if (state->policy) {
      config.state.policy =
          *state->policy == "renormalize" ? NormalizationPolicy::Renormalize : NormalizationPolicy::Reject;
    }
    if (state->p) config.tactics.p = *state->p;
    if (state->q) config.tactics.q = *state->q;
  }
  if (!common.format.empty()) {
    config.output.format = common.format == "csv"    ? OutputFormat::Csv
                           : common.format == "json" ? OutputFormat::Json
                                                     : OutputFormat::Text;
  }
  if (!common.out_path.empty()) config.output.path = common.out_path;

  // Domain checks for values that bypassed the config parser.
  try {
    validate(config.game.params, config.game.strict_signs);
    (void)config.build_state();
    validate(config.tactics);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return config;
}

// Output sink: standard output or the file named by the configuration.
class Sink {
 public:
  Sink(const RunConfig& config, std::ostream& fallback) : stream_(&fallback) {
    if (config.output.path) {
      file_ = std::make_unique<std::ofstream>(*config.output.path);
      if (!*file_) throw UsageError("cannot open output file '" + *config.output.path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

OutputFormat resolve(OutputFormat f, OutputFormat fallback) { return f == OutputFormat::Default ? fallback : f; }

int cmd_classical(const RunConfig& config, std::ostream& out) {
  ClassicalResult result{config.build_game(), {}};
  result.ess = classical_ess(result.game);
  Sink sink(config, out);
  if (resolve(config.output.format, OutputFormat::Text) == OutputFormat::Json) {
    write_classical_json(*sink, result);
  } else {
    write_classical_text(*sink, result);
  }
  return kExitOk;
}

int cmd_analyze(const RunConfig& config, std::optional<double> tol, std::ostream& out) {
  const auto game = config.build_game();
  const auto state = config.build_state();
  const auto surfaces = payoff_surface(state, game);
  AnalysisResult result;
  result.state = state;
  result.state_symmetric = is_symmetric(state, 1e-9);
  result.tactics = config.tactics;
  result.tactic_payoffs = expected_payoffs_trace(state, game, config.tactics);
  result.report = tol ? analyze(surfaces.alice, surfaces.bob, *tol) : analyze(surfaces);
  Sink sink(config, out);
  if (resolve(config.output.format, OutputFormat::Text) == OutputFormat::Json) {
    write_analysis_json(*sink, result);
  } else {
    write_analysis_text(*sink, result);
  }
  return kExitOk;
}

int cmd_sweep(RunConfig config, const SweepOptions& opts, std::ostream& out) {
  auto parse_axis = [](const std::string& name) {
    if (name == "a2") return Modulus::A2;
    if (name == "b2") return Modulus::B2;
    if (name == "c2") return Modulus::C2;
    return Modulus::D2;
  };
  if (opts.x) config.sweep.x_axis = parse_axis(*opts.x);
  if (opts.y) config.sweep.y_axis = parse_axis(*opts.y);
  if (opts.resolution) config.sweep.resolution = *opts.resolution;
  if (opts.split) config.sweep.split = *opts.split;
  std::vector<SweepCell> cells;
  try {
    cells = run_sweep(config.build_game(), config.sweep);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  Sink sink(config, out);
  if (resolve(config.output.format, OutputFormat::Csv) == OutputFormat::Json) {
    write_sweep_json(*sink, cells);
  } else {
    write_sweep_csv(*sink, cells);
  }
  return kExitOk;
}

int cmd_simulate(RunConfig config, const SimulateOptions& opts, std::ostream& out) {
  auto& sim = config.simulation;
  if (opts.incumbent) sim.incumbent = *opts.incumbent;
  if (opts.mutant) sim.mutant = *opts.mutant;
  if (opts.incumbent_col) sim.incumbent_col = *opts.incumbent_col;
  if (opts.mutant_col) sim.mutant_col = *opts.mutant_col;
  if (opts.epsilon) sim.dynamics.epsilon = *opts.epsilon;
  if (opts.generations) sim.dynamics.generations = *opts.generations;
  if (opts.step_size) sim.dynamics.step_size = *opts.step_size;
  if (opts.extinction_threshold) sim.dynamics.extinction_threshold = *opts.extinction_threshold;
  if (!sim.incumbent || !sim.mutant) {
    throw UsageError("simulate needs an incumbent and a mutant strategy ([simulation] or --incumbent/--mutant)");
  }

  const auto surfaces = payoff_surface(config.build_state(), config.build_game());
  const bool symmetric = surfaces_symmetric(surfaces.alice, surfaces.bob,
                                            default_tolerance(surfaces.alice, surfaces.bob));
  const OutputFormat format = resolve(config.output.format, OutputFormat::Csv);
  try {
    if (symmetric && !sim.incumbent_col && !sim.mutant_col) {
      InvasionScenario<double> scenario{surfaces.alice, *sim.incumbent, *sim.mutant, sim.dynamics};
      const auto trajectory = simulate_invasion(scenario);
      Sink sink(config, out);
      format == OutputFormat::Json ? write_trajectory_json(*sink, trajectory)
                                   : write_trajectory_csv(*sink, trajectory);
    } else {
      TwoPopulationScenario<double> scenario{surfaces,
                                             *sim.incumbent,
                                             sim.incumbent_col.value_or(*sim.incumbent),
                                             *sim.mutant,
                                             sim.mutant_col.value_or(*sim.mutant),
                                             sim.dynamics};
      const auto trajectory = simulate_two_population_invasion(scenario);
      Sink sink(config, out);
      format == OutputFormat::Json ? write_trajectory_json(*sink, trajectory)
                                   : write_trajectory_csv(*sink, trajectory);
    }
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return kExitOk;
}

int cmd_verify(const VerifyOptions& opts, const std::string& out_path, std::ostream& out) {
  const auto outcome = run_verification(opts);
  std::unique_ptr<std::ofstream> file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file = std::make_unique<std::ofstream>(out_path);
    if (!*file) throw UsageError("cannot open output file '" + out_path + "'");
    sink = file.get();
  }
  for (const auto& line : outcome.lines) *sink << line << '\n';
  *sink << (outcome.passed() ? "verify: all " : "verify: ") << outcome.checks - outcome.failures << " of "
        << outcome.checks << " checks passed\n";
  return outcome.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Hawk-Dove game: payoffs, Nash equilibria and evolutionary stability", "qhd"};
  app.require_subcommand(1);

  CommonOptions common;
  GameOptions game;
  StateOptions state;
  SweepOptions sweep;
  SimulateOptions simulate;
  VerifyOptions verify;
  std::string verify_out;

  auto* classical = app.add_subcommand("classical", "Classical payoff matrix and ESS analysis");
  add_common(classical, common);
  add_game(classical, game);

  auto* analyze_cmd = app.add_subcommand("analyze", "Payoff surfaces, Nash equilibria and ESS for a state");
  add_common(analyze_cmd, common);
  add_game(analyze_cmd, game);
  add_state(analyze_cmd, state);
  analyze_cmd->add_option("--p", state.p, "Alice's identity probability for the reported payoffs")
      ->check(CLI::Range(0.0, 1.0));
  analyze_cmd->add_option("--q", state.q, "Bob's identity probability for the reported payoffs")
      ->check(CLI::Range(0.0, 1.0));
  analyze_cmd->add_option("--tol", state.tol, "Strictness tolerance (default 1e-9 x payoff scale)")
      ->check(CLI::NonNegativeNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "Grid two squared moduli of the initial state");
  add_common(sweep_cmd, common);
  add_game(sweep_cmd, game);
  const auto axes = CLI::IsMember({"a2", "b2", "c2", "d2"});
  sweep_cmd->add_option("--x", sweep.x, "First gridded modulus")->check(axes);
  sweep_cmd->add_option("--y", sweep.y, "Second gridded modulus")->check(axes);
  sweep_cmd->add_option("--resolution", sweep.resolution, "Grid points per axis")->check(CLI::Range(2, 10001));
  sweep_cmd->add_option("--split", sweep.split, "Share of leftover mass for the first remaining modulus")
      ->check(CLI::Range(0.0, 1.0));

  auto* simulate_cmd = app.add_subcommand("simulate", "Replicator dynamics of a mutant invasion");
  add_common(simulate_cmd, common);
  add_game(simulate_cmd, game);
  add_state(simulate_cmd, state);
  const auto unit = CLI::Range(0.0, 1.0);
  simulate_cmd->add_option("--incumbent", simulate.incumbent, "Incumbent strategy")->check(unit);
  simulate_cmd->add_option("--mutant", simulate.mutant, "Mutant strategy")->check(unit);
  simulate_cmd->add_option("--incumbent-col", simulate.incumbent_col, "Column-role incumbent")->check(unit);
  simulate_cmd->add_option("--mutant-col", simulate.mutant_col, "Column-role mutant")->check(unit);
  simulate_cmd->add_option("--epsilon", simulate.epsilon, "Initial mutant share");
  simulate_cmd->add_option("--generations", simulate.generations, "Generation budget");
  simulate_cmd->add_option("--step-size", simulate.step_size, "Replicator step size");
  simulate_cmd->add_option("--extinction-threshold", simulate.extinction_threshold, "Extinction threshold");

  auto* verify_cmd = app.add_subcommand("verify", "Self-check: oracle draws plus golden cases");
  verify_cmd->add_option("--trials", verify.trials, "Number of random draws");
  verify_cmd->add_option("--seed", verify.seed, "Seed for std::mt19937_64");
  verify_cmd->add_option("--tol", verify.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", verify_out, "Write the report to PATH");

  std::vector<const char*> argv{"qhd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qhd: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (classical->parsed()) {
      return cmd_classical(build_config(common, game, nullptr), out);
    }
    if (analyze_cmd->parsed()) return cmd_analyze(build_config(common, game, &state), state.tol, out);
    if (sweep_cmd->parsed()) return cmd_sweep(build_config(common, game, nullptr), sweep, out);
    if (simulate_cmd->parsed()) return cmd_simulate(build_config(common, game, &state), simulate, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, verify_out, out);
  } catch (const ConfigError& e) {
    err << "qhd: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "qhd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "qhd: " << e.what() << '\n';
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace qhd
