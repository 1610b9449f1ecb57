#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acfeas::reduction {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Literal {
  int var = 0;
  bool negated = false;
};

struct Clause {
  std::array<Literal, 3> lits;
};

/// An instance of the exactly-one-true satisfiability variant: every clause
/// has three literals and is satisfied when precisely one of them is true.
struct CnfInstance {
  int num_vars = 0;
  std::vector<Clause> clauses;
};

struct Assignment {
  std::vector<bool> values;  // values[j - 1] holds variable j

  bool value(int var) const { return values.at(var - 1); }
  bool value(const Literal& lit) const { return value(lit.var) != lit.negated; }
};

/// DIMACS-style input: `c` comment lines, a `p cnf <vars> <clauses>` header,
/// then one clause per line as three nonzero integers terminated by 0.
/// Clause semantics are exactly-one-true, not at-least-one-true.
/// Throws FormatError naming the offending line.
CnfInstance parse_cnf(std::string_view text);

/// True iff every clause has exactly one true literal under `a`.
bool verify_one_in_three(const CnfInstance& cnf, const Assignment& a);

inline constexpr int kBruteForceMaxVars = 24;

/// Enumerates all 2^n assignments in lexicographic order over
/// (x1, ..., xn) with false before true, returning the first satisfying
/// one. Throws std::invalid_argument for more than kBruteForceMaxVars
/// variables.
std::optional<Assignment> brute_force_sat(const CnfInstance& cnf);

/// Assignment files: one `<var> 0|1` pair per line, every variable covered.
Assignment parse_assignment_text(std::string_view text, int num_vars);
std::string format_assignment_text(const Assignment& a);

}  // namespace acfeas::reduction
