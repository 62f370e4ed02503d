#include "qhd/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace qhd {

using nlohmann::json;

std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string pair_text(const PayoffPair<double>& p) {
  return "(" + format_short(p.row) + ", " + format_short(p.col) + ")";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

json matrix_json(const Eigen::Matrix2d& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

json surface_json(const PayoffSurface<double>& s) {
  return {{"k_pq", s.k_pq}, {"k_p", s.k_p}, {"k_q", s.k_q}, {"k_0", s.k_0}};
}

std::string surface_text(const PayoffSurface<double>& s) {
  return "k_pq = " + format_short(s.k_pq) + ", k_p = " + format_short(s.k_p) +
         ", k_q = " + format_short(s.k_q) + ", k_0 = " + format_short(s.k_0);
}

json candidate_json(const EquilibriumCandidate<double>& c, const SurfacePair<double>& s) {
  json checks = json::array();
  for (const auto& chk : c.justification) {
    checks.push_back({{"check", chk.description}, {"margin", chk.margin}});
  }
  return {{"p_star", c.p_star},
          {"q_star", c.q_star},
          {"kind", to_string(c.kind)},
          {"ne_status", to_string(c.ne_status)},
          {"ess_status", to_string(c.ess_status)},
          {"p_range", json::array({c.p_range.lo, c.p_range.hi})},
          {"q_range", json::array({c.q_range.lo, c.q_range.hi})},
          {"payoff_A", s.alice(c.p_star, c.q_star)},
          {"payoff_B", s.bob(c.p_star, c.q_star)},
          {"justification", checks}};
}

}  // namespace

void write_classical_text(std::ostream& out, const ClassicalResult& r) {
  using S = Strategy;
  const auto& g = r.game;
  out << "payoff matrix (row, column):\n";
  out << "       " << pad("H", 24) << "D\n";
  out << "  H    " << pad(pair_text(g(S::Hawk, S::Hawk)), 24) << pair_text(g(S::Hawk, S::Dove)) << '\n';
  out << "  D    " << pad(pair_text(g(S::Dove, S::Hawk)), 24) << pair_text(g(S::Dove, S::Dove)) << '\n';
  out << "Hawk: " << to_string(r.ess.hawk_pure) << '\n';
  out << "Dove: " << to_string(r.ess.dove_pure) << '\n';
  if (r.ess.mixed) {
    out << (r.ess.mixed->stable ? "mixed ESS h = " : "mixed NE (not stable) h = ")
        << format_exact(r.ess.mixed->hawk_fraction) << '\n';
  } else {
    out << "mixed ESS: none\n";
  }
  out << "reasons:\n";
  for (const auto& reason : r.ess.reasons) out << "  - " << reason << '\n';
}

void write_classical_json(std::ostream& out, const ClassicalResult& r) {
  json j;
  j["matrix"] = {{"row", matrix_json(r.game.row)}, {"col", matrix_json(r.game.col)}};
  j["hawk"] = to_string(r.ess.hawk_pure);
  j["dove"] = to_string(r.ess.dove_pure);
  j["mixed"] = r.ess.mixed ? json{{"h", r.ess.mixed->hawk_fraction}, {"stable", r.ess.mixed->stable}}
                           : json(nullptr);
  j["reasons"] = r.ess.reasons;
  out << j.dump(2) << '\n';
}

void write_analysis_text(std::ostream& out, const AnalysisResult& r) {
  const auto probs = r.state.probabilities();
  const auto& s = r.report.surfaces;
  out << "state: |a|^2 = " << format_short(probs(kHH)) << ", |b|^2 = " << format_short(probs(kDD))
      << ", |c|^2 = " << format_short(probs(kHD)) << ", |d|^2 = " << format_short(probs(kDH)) << '\n';
  out << "game: " << to_string(r.report.game_kind) << '\n';
  out << "surface A: " << surface_text(s.alice) << '\n';
  out << "surface B: " << surface_text(s.bob) << '\n';
  out << "tolerance: " << format_short(r.report.tol) << '\n';
  out << "payoffs at tactics (" << format_short(r.tactics.p) << ", " << format_short(r.tactics.q)
      << "): A = " << format_short(r.tactic_payoffs.alice) << ", B = " << format_short(r.tactic_payoffs.bob)
      << '\n';
  out << "candidates:\n";
  for (const auto& c : r.report.candidates) {
    out << "  " << (is_nash(c.ne_status) ? "NE" : "--") << " (" << format_short(c.p_star) << ", "
        << format_short(c.q_star) << ") kind=" << to_string(c.kind) << " ne=" << to_string(c.ne_status)
        << " ESS=" << (c.ess_status == EssStatus::ESS ? "true" : "false")
        << " ess_status=" << to_string(c.ess_status) << " payoff A=" << format_short(s.alice(c.p_star, c.q_star))
        << " B=" << format_short(s.bob(c.p_star, c.q_star)) << '\n';
    if (c.ne_status == NeStatus::NEContinuum) {
      out << "      p in [" << format_short(c.p_range.lo) << ", " << format_short(c.p_range.hi) << "], q in ["
          << format_short(c.q_range.lo) << ", " << format_short(c.q_range.hi) << "]\n";
    }
    for (const auto& chk : c.justification) {
      out << "      " << chk.description << ": " << format_short(chk.margin) << '\n';
    }
  }
}

void write_analysis_json(std::ostream& out, const AnalysisResult& r) {
  const auto probs = r.state.probabilities();
  json j;
  j["moduli"] = {{"a2", probs(kHH)}, {"b2", probs(kDD)}, {"c2", probs(kHD)}, {"d2", probs(kDH)}};
  j["game_kind"] = to_string(r.report.game_kind);
  j["state_symmetric"] = r.state_symmetric;
  j["surface_A"] = surface_json(r.report.surfaces.alice);
  j["surface_B"] = surface_json(r.report.surfaces.bob);
  j["tolerance"] = r.report.tol;
  j["tactics"] = {{"p", r.tactics.p}, {"q", r.tactics.q}};
  j["tactic_payoffs"] = {{"A", r.tactic_payoffs.alice}, {"B", r.tactic_payoffs.bob}};
  j["candidates"] = json::array();
  for (const auto& c : r.report.candidates) j["candidates"].push_back(candidate_json(c, r.report.surfaces));
  out << j.dump(2) << '\n';
}

namespace {

struct SweepSummary {
  std::string kinds, p_star, q_star;
  bool ess_found = false;
};

SweepSummary summarize(const EquilibriumReport<double>& report) {
  SweepSummary s;
  bool first = true;
  for (const auto& c : report.candidates) {
    if (!is_nash(c.ne_status)) continue;
    if (!first) {
      s.kinds += ';';
      s.p_star += ';';
      s.q_star += ';';
    }
    first = false;
    s.kinds += c.ne_status == NeStatus::NEContinuum ? std::string(to_string(c.kind)) + "-continuum"
                                                    : std::string(to_string(c.kind));
    s.p_star += format_exact(c.p_star);
    s.q_star += format_exact(c.q_star);
    s.ess_found |= c.ess_status == EssStatus::ESS;
  }
  return s;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << kSweepCsvHeader << '\n';
  for (const auto& cell : cells) {
    const auto& a = cell.report.surfaces.alice;
    const auto& b = cell.report.surfaces.bob;
    const auto sum = summarize(cell.report);
    for (double m : cell.moduli) out << format_exact(m) << ',';
    for (double k : {a.k_pq, a.k_p, a.k_q, a.k_0, b.k_pq, b.k_p, b.k_q, b.k_0}) out << format_exact(k) << ',';
    out << (cell.symmetric() ? "true" : "false") << ',' << sum.kinds << ',' << sum.p_star << ','
        << sum.q_star << ',' << (sum.ess_found ? "true" : "false") << '\n';
  }
}

void write_sweep_json(std::ostream& out, const std::vector<SweepCell>& cells) {
  json rows = json::array();
  for (const auto& cell : cells) {
    json ne = json::array();
    for (const auto& c : cell.report.candidates) {
      if (is_nash(c.ne_status)) ne.push_back(candidate_json(c, cell.report.surfaces));
    }
    const auto sum = summarize(cell.report);
    rows.push_back({{"a2", cell.moduli[0]},
                    {"b2", cell.moduli[1]},
                    {"c2", cell.moduli[2]},
                    {"d2", cell.moduli[3]},
                    {"surface_A", surface_json(cell.report.surfaces.alice)},
                    {"surface_B", surface_json(cell.report.surfaces.bob)},
                    {"symmetric", cell.symmetric()},
                    {"nash", ne},
                    {"ess_found", sum.ess_found}});
  }
  out << rows.dump(2) << '\n';
}

void write_trajectory_csv(std::ostream& out, const InvasionTrajectory<double>& t) {
  out << "generation,share\n";
  for (std::size_t g = 0; g < t.shares.size(); ++g) out << g << ',' << format_exact(t.shares[g]) << '\n';
  out << "# verdict: " << to_string(t.verdict) << '\n';
}

void write_trajectory_json(std::ostream& out, const InvasionTrajectory<double>& t) {
  json j{{"verdict", to_string(t.verdict)},
         {"extinction_threshold", t.extinction_threshold},
         {"shares", t.shares}};
  out << j.dump(2) << '\n';
}

void write_trajectory_csv(std::ostream& out, const TwoPopulationTrajectory<double>& t) {
  out << "generation,row_share,col_share\n";
  for (std::size_t g = 0; g < t.row_shares.size(); ++g) {
    out << g << ',' << format_exact(t.row_shares[g]) << ',' << format_exact(t.col_shares[g]) << '\n';
  }
  out << "# verdict: " << to_string(t.verdict) << '\n';
}

void write_trajectory_json(std::ostream& out, const TwoPopulationTrajectory<double>& t) {
  json j{{"verdict", to_string(t.verdict)},
         {"extinction_threshold", t.extinction_threshold},
         {"row_shares", t.row_shares},
         {"col_shares", t.col_shares}};
  out << j.dump(2) << '\n';
}

}  // namespace qhd
