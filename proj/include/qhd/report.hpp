#pragma once

// Text, CSV and JSON renderings of analysis results. CSV and JSON numbers use
// 17 significant digits; text reports use 12.

#include <ostream>
#include <string>
#include <vector>

#include "qhd/ess_analyzer.hpp"
#include "qhd/evo_dynamics.hpp"
#include "qhd/game_core.hpp"
#include "qhd/quantum_engine.hpp"
#include "qhd/sweep.hpp"

namespace qhd {

/// printf("%.17g").
std::string format_exact(double v);
/// printf("%.12g").
std::string format_short(double v);

struct ClassicalResult {
  BimatrixGame2x2<double> game;
  ClassicalESSReport<double> ess;
};

struct AnalysisResult {
  InitialState<double> state;
  bool state_symmetric = false;
  TacticProfile<double> tactics;
  PlayerPayoffs<double> tactic_payoffs;  // trace route at `tactics`
  EquilibriumReport<double> report;
};

void write_classical_text(std::ostream& out, const ClassicalResult& r);
void write_classical_json(std::ostream& out, const ClassicalResult& r);

void write_analysis_text(std::ostream& out, const AnalysisResult& r);
void write_analysis_json(std::ostream& out, const AnalysisResult& r);

inline constexpr const char* kSweepCsvHeader =
    "a2,b2,c2,d2,kpq_A,kp_A,kq_A,k0_A,kpq_B,kp_B,kq_B,k0_B,symmetric,ne_kinds,p_star,q_star,ess_found";

/// Header plus one row per cell. ne_kinds, p_star and q_star list every Nash
/// candidate in report order, joined with ';'. ess_found is true when any
/// candidate is classified ESS.
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);
void write_sweep_json(std::ostream& out, const std::vector<SweepCell>& cells);

void write_trajectory_csv(std::ostream& out, const InvasionTrajectory<double>& t);
void write_trajectory_json(std::ostream& out, const InvasionTrajectory<double>& t);
void write_trajectory_csv(std::ostream& out, const TwoPopulationTrajectory<double>& t);
void write_trajectory_json(std::ostream& out, const TwoPopulationTrajectory<double>& t);

}  // namespace qhd
