#include "acfeas/cnf.hpp"

#include <cstdint>
#include <sstream>

namespace acfeas::reduction {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

CnfInstance parse_cnf(std::string_view text) {
  CnfInstance cnf;
  int declared_clauses = -1;
  bool have_header = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    if (tok == "c") continue;
    if (tok == "p") {
      if (have_header) fail(line_no, "duplicate header");
      std::string fmt;
      if (!(ls >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf")
        fail(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      if (cnf.num_vars < 1) fail(line_no, "variable count must be positive");
      if (declared_clauses < 0) fail(line_no, "negative clause count");
      have_header = true;
      continue;
    }
    if (!have_header) fail(line_no, "clause before 'p cnf' header");
    std::vector<int> lits;
    ls.clear();
    ls.str(line);
    int v = 0;
    bool terminated = false;
    while (ls >> v) {
      if (v == 0) {
        terminated = true;
        break;
      }
      lits.push_back(v);
    }
    if (!ls.eof() && !terminated) fail(line_no, "non-integer token in clause");
    if (!terminated) fail(line_no, "clause not terminated by 0");
    if (lits.size() != 3)
      fail(line_no, "clause has " + std::to_string(lits.size()) +
                        " literals, expected 3");
    Clause clause;
    for (int i = 0; i < 3; ++i) {
      const int var = std::abs(lits[i]);
      if (var > cnf.num_vars)
        fail(line_no, "variable " + std::to_string(var) + " out of range");
      clause.lits[i] = {var, lits[i] < 0};
    }
    cnf.clauses.push_back(clause);
  }
  if (!have_header) throw FormatError("missing 'p cnf' header");
  if (declared_clauses != static_cast<int>(cnf.clauses.size()))
    throw FormatError("header declares " + std::to_string(declared_clauses) +
                      " clauses, found " + std::to_string(cnf.clauses.size()));
  return cnf;
}

bool verify_one_in_three(const CnfInstance& cnf, const Assignment& a) {
  if (static_cast<int>(a.values.size()) != cnf.num_vars)
    throw std::invalid_argument("assignment does not cover all variables");
  for (const Clause& c : cnf.clauses) {
    int trues = 0;
    for (const Literal& lit : c.lits) trues += a.value(lit) ? 1 : 0;
    if (trues != 1) return false;
  }
  return true;
}

std::optional<Assignment> brute_force_sat(const CnfInstance& cnf) {
  if (cnf.num_vars > kBruteForceMaxVars)
    throw std::invalid_argument("brute_force_sat: more than " +
                                std::to_string(kBruteForceMaxVars) +
                                " variables");
  const int n = cnf.num_vars;
  Assignment a;
  a.values.assign(n, false);
  const std::uint32_t total = 1u << n;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    // Lexicographic over (x1, ..., xn): x1 is the most significant bit.
    for (int j = 1; j <= n; ++j)
      a.values[j - 1] = (mask >> (n - j)) & 1u;
    if (verify_one_in_three(cnf, a)) return a;
  }
  return std::nullopt;
}

Assignment parse_assignment_text(std::string_view text, int num_vars) {
  Assignment a;
  a.values.assign(num_vars, false);
  std::vector<bool> seen(num_vars, false);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    int var = 0, bit = 0;
    if (!(ls >> var)) continue;
    if (!(ls >> bit) || (bit != 0 && bit != 1))
      fail(line_no, "expected '<var> 0|1'");
    if (var < 1 || var > num_vars)
      fail(line_no, "variable " + std::to_string(var) + " out of range");
    if (seen[var - 1]) fail(line_no, "duplicate variable");
    seen[var - 1] = true;
    a.values[var - 1] = bit == 1;
  }
  for (int j = 1; j <= num_vars; ++j)
    if (!seen[j - 1])
      throw FormatError("no value for variable " + std::to_string(j));
  return a;
}

std::string format_assignment_text(const Assignment& a) {
  std::string out;
  for (size_t i = 0; i < a.values.size(); ++i) {
    out += std::to_string(i + 1);
    out += a.values[i] ? " 1\n" : " 0\n";
  }
  return out;
}

}  // namespace acfeas::reduction
