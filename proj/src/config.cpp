#include "qhd/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace qhd {

ConfigError::ConfigError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
    : Error(line == 0 ? what
                      : "line " + std::to_string(line) + ", column " + std::to_string(column) +
                            ": " + what),
      kind_(kind),
      line_(line),
      column_(column) {}

const char* to_string(Modulus m) {
  switch (m) {
    case Modulus::A2: return "a2";
    case Modulus::B2: return "b2";
    case Modulus::C2: return "c2";
    case Modulus::D2: return "d2";
  }
  return "?";
}

namespace {

struct Value {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;  // 1-based column of the first value character
};

[[noreturn]] void domain_error(const Value& v, const std::string& field, const std::string& allowed) {
  throw ConfigError(ConfigError::Kind::Domain, v.line, v.column,
                    field + " = " + v.text + " is outside the allowed range: " + allowed);
}

double as_number(const Value& v) {
  try {
    return evaluate_number(v.text);
  } catch (const ConfigError& e) {
    // Re-anchor the column to the document.
    std::string what = e.what();
    throw ConfigError(ConfigError::Kind::Syntax, v.line, v.column + e.column() - 1, what);
  }
}

bool as_bool(const Value& v, const std::string& field) {
  if (v.text == "true") return true;
  if (v.text == "false") return false;
  domain_error(v, field, "true or false");
}

std::string as_word(const Value& v) {
  const std::string& t = v.text;
  if (t.size() >= 2 && t.front() == '"') {
    if (t.back() != '"') {
      throw ConfigError(ConfigError::Kind::Syntax, v.line, v.column + t.size() - 1,
                        "unterminated string");
    }
    return t.substr(1, t.size() - 2);
  }
  return t;
}

std::complex<double> as_amplitude(const Value& v) {
  const std::string& t = v.text;
  if (t.empty() || t.front() != '[') return {as_number(v), 0.0};
  if (t.back() != ']') {
    throw ConfigError(ConfigError::Kind::Syntax, v.line, v.column + t.size() - 1,
                      "expected ']' closing the array");
  }
  const std::string inner = t.substr(1, t.size() - 2);
  const auto comma = inner.find(',');
  if (comma == std::string::npos || inner.find(',', comma + 1) != std::string::npos) {
    throw ConfigError(ConfigError::Kind::Syntax, v.line, v.column,
                      "complex amplitude must be a two-element array [re, im]");
  }
  Value re{inner.substr(0, comma), v.line, v.column + 1};
  Value im{inner.substr(comma + 1), v.line, v.column + 2 + comma};
  return {as_number(re), as_number(im)};
}

double as_probability(const Value& v, const std::string& field) {
  const double x = as_number(v);
  if (!(x >= 0 && x <= 1)) domain_error(v, field, "[0, 1]");
  return x;
}

Modulus as_modulus(const Value& v, const std::string& field) {
  const std::string w = as_word(v);
  if (w == "a2") return Modulus::A2;
  if (w == "b2") return Modulus::B2;
  if (w == "c2") return Modulus::C2;
  if (w == "d2") return Modulus::D2;
  domain_error(v, field, "one of a2, b2, c2, d2");
}

using Handler = std::function<void(RunConfig&, const Value&)>;
using SectionTable = std::map<std::string, Handler, std::less<>>;

const std::map<std::string, SectionTable, std::less<>>& schema() {
  static const std::map<std::string, SectionTable, std::less<>> table = {
      {"game",
       {
           {"resource_value", [](RunConfig& c, const Value& v) { c.game.params.resource_value = as_number(v); }},
           {"injury_cost", [](RunConfig& c, const Value& v) { c.game.params.injury_cost = as_number(v); }},
           {"display_cost", [](RunConfig& c, const Value& v) { c.game.params.display_cost = as_number(v); }},
           {"losing_cost", [](RunConfig& c, const Value& v) { c.game.params.losing_cost = as_number(v); }},
           {"strict_signs", [](RunConfig& c, const Value& v) { c.game.strict_signs = as_bool(v, "strict_signs"); }},
       }},
      {"state",
       {
           {"hh", [](RunConfig& c, const Value& v) { c.state.amplitudes.hh = as_amplitude(v); }},
           {"dd", [](RunConfig& c, const Value& v) { c.state.amplitudes.dd = as_amplitude(v); }},
           {"hd", [](RunConfig& c, const Value& v) { c.state.amplitudes.hd = as_amplitude(v); }},
           {"dh", [](RunConfig& c, const Value& v) { c.state.amplitudes.dh = as_amplitude(v); }},
           {"policy",
            [](RunConfig& c, const Value& v) {
              const std::string w = as_word(v);
              if (w == "reject") {
                c.state.policy = NormalizationPolicy::Reject;
              } else if (w == "renormalize") {
                c.state.policy = NormalizationPolicy::Renormalize;
              } else {
                domain_error(v, "policy", "reject or renormalize");
              }
            }},
       }},
      {"tactics",
       {
           {"p", [](RunConfig& c, const Value& v) { c.tactics.p = as_probability(v, "p"); }},
           {"q", [](RunConfig& c, const Value& v) { c.tactics.q = as_probability(v, "q"); }},
       }},
      {"simulation",
       {
           {"incumbent", [](RunConfig& c, const Value& v) { c.simulation.incumbent = as_probability(v, "incumbent"); }},
           {"mutant", [](RunConfig& c, const Value& v) { c.simulation.mutant = as_probability(v, "mutant"); }},
           {"incumbent_col",
            [](RunConfig& c, const Value& v) { c.simulation.incumbent_col = as_probability(v, "incumbent_col"); }},
           {"mutant_col", [](RunConfig& c, const Value& v) { c.simulation.mutant_col = as_probability(v, "mutant_col"); }},
           {"epsilon",
            [](RunConfig& c, const Value& v) {
              const double x = as_number(v);
              if (!(x > 0 && x < 1)) domain_error(v, "epsilon", "(0, 1)");
              c.simulation.dynamics.epsilon = x;
            }},
           {"generations",
            [](RunConfig& c, const Value& v) {
              const double x = as_number(v);
              if (!(x >= 1 && x <= 1e9 && x == std::floor(x))) domain_error(v, "generations", "integer in [1, 1e9]");
              c.simulation.dynamics.generations = static_cast<std::size_t>(x);
            }},
           {"step_size",
            [](RunConfig& c, const Value& v) {
              const double x = as_number(v);
              if (!(x > 0 && x <= 1)) domain_error(v, "step_size", "(0, 1]");
              c.simulation.dynamics.step_size = x;
            }},
           {"extinction_threshold",
            [](RunConfig& c, const Value& v) {
              const double x = as_number(v);
              if (!(x > 0 && x < 0.5)) domain_error(v, "extinction_threshold", "(0, 0.5)");
              c.simulation.dynamics.extinction_threshold = x;
            }},
       }},
      {"sweep",
       {
           {"x", [](RunConfig& c, const Value& v) { c.sweep.x_axis = as_modulus(v, "x"); }},
           {"y", [](RunConfig& c, const Value& v) { c.sweep.y_axis = as_modulus(v, "y"); }},
           {"resolution",
            [](RunConfig& c, const Value& v) {
              const double x = as_number(v);
              if (!(x >= 2 && x <= 10001 && x == std::floor(x))) domain_error(v, "resolution", "integer in [2, 10001]");
              c.sweep.resolution = static_cast<std::size_t>(x);
            }},
           {"split", [](RunConfig& c, const Value& v) { c.sweep.split = as_probability(v, "split"); }},
       }},
      {"output",
       {
           {"format",
            [](RunConfig& c, const Value& v) {
              const std::string w = as_word(v);
              if (w == "csv") {
                c.output.format = OutputFormat::Csv;
              } else if (w == "json") {
                c.output.format = OutputFormat::Json;
              } else if (w == "text") {
                c.output.format = OutputFormat::Text;
              } else {
                domain_error(v, "format", "csv, json or text");
              }
            }},
           {"path", [](RunConfig& c, const Value& v) { c.output.path = as_word(v); }},
       }},
  };
  return table;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  }
  return true;
}

// Index of the first '#' outside a double-quoted string.
std::size_t comment_start(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return i;
  }
  return line.size();
}

std::pair<std::size_t, std::size_t> trim_bounds(std::string_view s, std::size_t from, std::size_t to) {
  while (from < to && std::isspace(static_cast<unsigned char>(s[from]))) ++from;
  while (to > from && std::isspace(static_cast<unsigned char>(s[to - 1]))) --to;
  return {from, to};
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  const auto& table = schema();
  const SectionTable* section = nullptr;
  std::string section_name;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;
  std::map<std::string, std::size_t> key_lines;  // "section.key" -> line

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = eol + 1;

    auto [b, e] = trim_bounds(line, 0, comment_start(line));
    if (b == e) continue;
    const std::string_view body = line.substr(b, e - b);

    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ConfigError(ConfigError::Kind::Syntax, line_no, e, "expected ']' closing the section header");
      }
      auto [nb, ne] = trim_bounds(body, 1, body.size() - 1);
      const std::string name(body.substr(nb, ne - nb));
      if (!is_identifier(name)) {
        throw ConfigError(ConfigError::Kind::Syntax, line_no, b + 2, "invalid section name");
      }
      auto it = table.find(name);
      if (it == table.end()) {
        throw ConfigError(ConfigError::Kind::UnknownKey, line_no, b + 1 + nb, "unknown section [" + name + "]");
      }
      if (!seen_sections.insert(name).second) {
        throw ConfigError(ConfigError::Kind::Syntax, line_no, b + 1, "duplicate section [" + name + "]");
      }
      section = &it->second;
      section_name = name;
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(ConfigError::Kind::Syntax, line_no, b + 1, "expected 'key = value'");
    }
    auto [kb, ke] = trim_bounds(body, 0, eq);
    auto [vb, ve] = trim_bounds(body, eq + 1, body.size());
    const std::string key(body.substr(kb, ke - kb));
    if (!is_identifier(key)) {
      throw ConfigError(ConfigError::Kind::Syntax, line_no, b + kb + 1, "invalid key");
    }
    if (vb == ve) {
      throw ConfigError(ConfigError::Kind::Syntax, line_no, b + eq + 2, "missing value for '" + key + "'");
    }
    if (section == nullptr) {
      throw ConfigError(ConfigError::Kind::Syntax, line_no, b + 1, "key '" + key + "' outside of any section");
    }
    auto handler = section->find(key);
    if (handler == section->end()) {
      throw ConfigError(ConfigError::Kind::UnknownKey, line_no, b + kb + 1,
                        "unknown key '" + key + "' in [" + section_name + "]");
    }
    const std::string qualified = section_name + "." + key;
    if (!seen_keys.insert(qualified).second) {
      throw ConfigError(ConfigError::Kind::Syntax, line_no, b + kb + 1, "duplicate key '" + key + "'");
    }
    key_lines[qualified] = line_no;
    handler->second(config, Value{std::string(body.substr(vb, ve - vb)), line_no, b + vb + 1});
  }

  if (!seen_sections.count("game")) {
    throw ConfigError(ConfigError::Kind::Missing, 0, 0, "missing required section [game]");
  }
  auto line_of = [&](const std::string& qualified) {
    auto it = key_lines.find(qualified);
    return it == key_lines.end() ? std::size_t{0} : it->second;
  };

  try {
    validate(config.game.params, config.game.strict_signs);
  } catch (const ValidationError& e) {
    throw ConfigError(ConfigError::Kind::Domain, line_of("game." + e.field()), 1, e.what());
  }
  try {
    (void)config.build_state();
  } catch (const Error& e) {
    throw ConfigError(ConfigError::Kind::Domain, line_of("state.hh"), 1, e.what());
  }
  if (config.sweep.x_axis == config.sweep.y_axis) {
    throw ConfigError(ConfigError::Kind::Domain, line_of("sweep.y"), 1, "sweep: x and y must name different moduli");
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigError::Kind::Missing, 0, 0, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace qhd
