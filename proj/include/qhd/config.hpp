#pragma once

// Run configuration: a sectioned key/value document.
//
//   # comment              (from '#' to end of line)
//   [section]
//   key = value
//
// Values are numeric expressions (decimal literals, + - * /, parentheses and
// sqrt(...)), booleans (true/false), bare words, double-quoted strings, or
// two-element arrays [re, im] for complex amplitudes. See README.md for the
// keys each section accepts.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "qhd/errors.hpp"
#include "qhd/evo_dynamics.hpp"
#include "qhd/game_core.hpp"
#include "qhd/quantum_engine.hpp"

namespace qhd {

class ConfigError : public Error {
 public:
  enum class Kind { Syntax, Domain, UnknownKey, Missing };

  ConfigError(Kind kind, std::size_t line, std::size_t column, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

enum class OutputFormat { Default, Text, Csv, Json };

enum class Modulus { A2, B2, C2, D2 };  // |a|^2 .. |d|^2 for a|HH> + b|DD> + c|HD> + d|DH>

const char* to_string(Modulus m);

struct GameSection {
  HawkDoveParams<double> params{};
  bool strict_signs = true;
};

struct StateSection {
  StateAmplitudes<double> amplitudes{{1.0, 0.0}, {}, {}, {}};
  NormalizationPolicy policy = NormalizationPolicy::Reject;
};

struct SimulationSection {
  std::optional<double> incumbent;
  std::optional<double> mutant;
  std::optional<double> incumbent_col;
  std::optional<double> mutant_col;
  DynamicsSettings dynamics{};
};

struct SweepSection {
  Modulus x_axis = Modulus::A2;
  Modulus y_axis = Modulus::B2;
  std::size_t resolution = 11;
  double split = 0.5;  // share of the leftover mass given to the first remaining modulus
};

struct OutputSection {
  OutputFormat format = OutputFormat::Default;
  std::optional<std::string> path;
};

struct RunConfig {
  GameSection game;
  StateSection state;
  TacticProfile<double> tactics{};
  SimulationSection simulation;
  SweepSection sweep;
  OutputSection output;

  BimatrixGame2x2<double> build_game() const { return build_hawk_dove(game.params, game.strict_signs); }
  InitialState<double> build_state() const { return make_initial_state(state.amplitudes, state.policy); }
};

/// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; I/O failures surface as ConfigError (line 0).
RunConfig load_config(const std::string& path);

/// Evaluates a numeric expression such as "sqrt(11/32)" or "-1e-6".
/// Throws ConfigError(Syntax) with column relative to the start of `text`.
double evaluate_number(std::string_view text);

}  // namespace qhd
