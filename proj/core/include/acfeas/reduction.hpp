#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acfeas/bgadget.hpp"
#include "acfeas/cnf.hpp"
#include "acfeas/network.hpp"

namespace acfeas::reduction {

/// Assembly constants. S and H are the nominal per-mode throughput values
/// the line limits are built from; the gadget's measured mode suprema sit
/// slightly below them (see the analyze report), which is surfaced, not
/// hidden, by the checker's demand slack.
struct ReductionConstants {
  static constexpr double S = 0.1592;
  static constexpr double H = 0.8864;
  static constexpr double coupler_limit = 1.0 / 20.0;
  static constexpr double coupler_reactance = 1.0;
  static constexpr double d_line_reactance = 0.5;
  static constexpr double variable_d_limit = S + H;
  static constexpr double clause_d_limit = 2.0 * S + H;
  static constexpr double variable_gen_capacity = S + H;
  static constexpr double clause_gen_capacity = 2.0 * S + H;
  static constexpr double mode_separation_bound = 0.201;
};

/// What a bus does in the compiled network; every bus id maps to one.
struct BusRole {
  std::string role;     // load, variable_copy_bus, variable_source,
                        // variable_sink, coupler, clause_copy_bus,
                        // clause_source, clause_sink, super_source
  int variable = 0;     // 1-based; 0 when not variable-scoped
  bool negated = false;
  int clause = 0;       // 1-based; 0 when not clause-scoped
  int slot = -1;        // literal position 0..2 within a clause
  int bus = -1;         // bus 0..4 within a B copy
  std::string side;     // "L" or "R" for couplers
};

struct ThroughputInstance {
  Network network;
  std::string load;  // bus D
  std::vector<std::pair<std::string, double>> generators;  // (bus, capacity)
  double threshold = 0.0;  // n (S+H) + m (2S+H)
  std::map<std::string, BusRole> label_map;
};

/// Clause/variable structure recovered from the label map, so a serialized
/// instance is self-describing.
struct InstanceStructure {
  int num_vars = 0;
  std::vector<std::array<Literal, 3>> clauses;

  CnfInstance to_cnf() const;
};

InstanceStructure derive_structure(const ThroughputInstance& inst);

/// Compiles an instance: per variable a pair of B copies joined through
/// s/t buses, per clause three B copies joined through a T bus, couplers
/// tying each clause copy to its variable-side copy, and a single load D.
/// Bus count is 17n + 19m + 1, line count 21n + 31m.
ThroughputInstance compile(const CnfInstance& cnf);

struct EncodeOptions {
  int delta_grid = 10001;  // sweep resolution for the max-throughput state
};

/// Builds the witness operating point for `a`: true-side copies run at the
/// max-throughput Mode II manifold state, false-side copies at the delta=0
/// Mode I state, every coupler-tied pair at identical phase angles (so all
/// coupler lines carry exactly zero), and the t/T chains at the arcsine of
/// the flow each line must carry. Angles saturate at the pi/2 cap when a
/// chain demands more flow than a sine allows (possible only for clauses
/// with two or more true literals, which overload their D line).
/// Encodes any assignment; the point is feasible iff `a` is one-in-three
/// satisfying.
OperatingPoint encode_witness(const ThroughputInstance& inst,
                              const Assignment& a,
                              const EncodeOptions& opts = {});

struct DLineLoad {
  double flow = 0.0;
  std::optional<double> limit;
};

struct DecodeReport {
  Assignment assignment;  // x_j true iff the positive-side copy is Mode II
  std::map<int, std::pair<gadget::Mode, gadget::Mode>> per_variable_modes;
  std::map<int, std::array<gadget::Mode, 3>> per_clause_modes;
  std::map<std::string, DLineLoad> d_line_loads;
  std::vector<std::string> infeasible_copies;
  double max_coupler_flow = 0.0;
  bool coupler_modes_agree = true;  // equal modes wherever the coupler
                                    // angle-difference bound holds
  bool consistent = false;  // exactly one Mode II per pair and per triple,
                            // and no Infeasible copy
  bool one_in_three_ok = false;
};

/// Reads each copy's internal theta (bus 3 angle minus bus 4 angle),
/// classifies its mode, and extracts the assignment.
DecodeReport decode_witness(const ThroughputInstance& inst,
                            const OperatingPoint& pt);

/// Replaces the many generators by one bus G wired to every source bus
/// with a unit-reactance line limited at that source's former capacity.
ThroughputInstance super_source_transform(const ThroughputInstance& inst);

struct WitnessCheck {
  FeasibilityReport feasibility;
  std::vector<std::string> capacity_violations;
  double demand = 0.0;
  double threshold = 0.0;
  double slack = 0.0;
  bool demand_ok = false;
  bool ok = false;  // feasible, capacities respected, demand within slack
};

/// Feasibility of a witness against an instance: generator and load
/// injections are read off the point, generator outputs must stay within
/// [0, capacity], and the demand delivered at the load is compared with
/// threshold - slack.
WitnessCheck check_witness(const ThroughputInstance& inst,
                           const OperatingPoint& pt, double epsilon,
                           double slack);

/// Default demand slack: 2e-2 (n + m).
double default_check_slack(const ThroughputInstance& inst);

}  // namespace acfeas::reduction
