#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mms/instance.hpp"

namespace mms {

struct CategoryDim {
  int size = 0;
  int q_minus = 0;
  int q_plus = 0;
};

/// Shape of an instance without values. Items are numbered consecutively per
/// category: category 0 holds 0..size_0-1 and so on.
struct Dimension {
  int n_agents = 0;
  std::vector<CategoryDim> categories;

  int num_items() const;
};

/// Throws InvalidInstance unless n >= 1 and every category satisfies
/// q- * n <= |C| <= q+ * n with 0 <= q- <= q+.
void validate_dimension(const Dimension& dim);

/// Dimension of an instance whose categories list consecutive item ids.
Dimension dimension_of(const Instance& inst);

/// Instance of the given dimension with the given valuations.
Instance instance_of(const Dimension& dim, const std::vector<std::vector<Rational>>& valuations);

inline constexpr std::size_t kBundleGuard = 4096;
inline constexpr std::size_t kAllocationGuard = 1'000'000;

/// Product over categories of sum_{c=q-..q+} C(|C|, c).
std::size_t count_feasible_bundles(const Dimension& dim);

/// All feasible bundles (sorted item lists), in lexicographic order.
/// Throws GuardExceeded when more than `guard` bundles exist.
std::vector<Bundle> enumerate_feasible_bundles(const Dimension& dim, std::size_t guard = kBundleGuard);

/// All feasible allocations as bundle indices into `bundles` (one per agent),
/// ordered lexicographically by their item-to-agent assignment vectors.
std::vector<std::vector<int>> enumerate_feasible_allocations(const Dimension& dim, const std::vector<Bundle>& bundles,
                                                             std::size_t guard = kAllocationGuard);

enum class VarType { Continuous, Binary };

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
  /// Bounds of continuous variables; binaries are implicitly in {0,1}.
  long lower = 0;
  std::optional<long> upper;
};

enum class Sense { LessEq, GreaterEq, Equal };

struct Term {
  long coef = 0;
  int var = 0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::Equal;
  long rhs = 0;
};

/// Minimize alpha subject to the rows below, over
///   alpha >= 0, u_i_g in [0,1], binaries p_i_k_s and l_i_s:
///   pc_i_k    sum_s p_i_k_s = 1
///   dj_i_g    sum_k sum_{s : g in S_s} p_i_k_s = 1
///   ge_i_k_s  sum_{g in S_s} u_i_g - p_i_k_s >= 0
///   le_i_s    sum_{g in S_s} u_i_g - alpha + |S_s| l_i_s <= |S_s|
///   fa_a      sum_i l_i_{A_i} >= 1      for every feasible allocation A
struct MblpModel {
  Dimension dim;
  std::vector<Bundle> bundles;
  std::vector<std::vector<int>> allocations;
  std::vector<Variable> variables;
  std::vector<Row> rows;

  int alpha() const { return 0; }
  int u(int agent, int item) const;
  int p(int agent, int k, int s) const;
  int l(int agent, int s) const;
  std::size_t num_binaries() const;
};

MblpModel build_mblp(const Dimension& dim, std::size_t bundle_guard = kBundleGuard,
                     std::size_t allocation_guard = kAllocationGuard);

/// Writes the model in LP text format with deterministic ordering.
void write_lp(const MblpModel& model, std::ostream& out);
std::string lp_text(const MblpModel& model);
/// Throws Error when the file cannot be written.
void emit_lp(const MblpModel& model, const std::string& path);

/// Bundle index table and naming scheme for an emitted model, as JSON text.
std::string mapping_json(const MblpModel& model);

struct ParsedTerm {
  long coef = 0;
  std::string var;
};

struct ParsedRow {
  std::string name;
  std::vector<ParsedTerm> terms;
  Sense sense = Sense::Equal;
  long rhs = 0;
};

struct ParsedLp {
  std::vector<ParsedTerm> objective;
  std::vector<ParsedRow> rows;
  /// Continuous variables with their (lower, upper) bounds.
  std::map<std::string, std::pair<long, std::optional<long>>> bounds;
  std::vector<std::string> binaries;
};

/// Reads back the subset of the LP format that write_lp produces. Throws
/// Error on anything else.
ParsedLp parse_lp(const std::string& text);

/// Values for every model variable, indexed like model.variables.
using Assignment = std::vector<Rational>;

/// The assignment from a goods instance of the model's dimension:
/// u_i_g = v_i(g) / mu_i, p from each agent's brute-force MMS partition,
/// l_i_s = 1 iff sum_{g in S_s} u_i_g < alpha. Throws PreconditionError when
/// some mu_i <= 0 or some u_i_g > 1.
Assignment mblp_witness(const MblpModel& model, const Instance& inst, const Rational& alpha);

/// Names of the rows (and variables, for bound or integrality violations)
/// that the assignment violates.
std::vector<std::string> violated_rows(const MblpModel& model, const Assignment& values);

/// True iff best_alpha of the goods instance is at most alpha. False when
/// best_alpha is unbounded (no agent has positive MMS).
bool check_alpha_witness(const Dimension& dim, const std::vector<std::vector<Rational>>& valuations,
                         const Rational& alpha);

}  // namespace mms
