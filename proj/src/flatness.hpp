#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covering.hpp"

namespace ct {

// --- weighted fiber degrees ----------------------------------------------

// One sampled weighted fiber degree: at a stratum sample point, approaching
// along one local branch of the base (labelled by the over-ideal of the
// components supported on it; "base" for full support).
struct DegreeCell {
  std::string stratum;
  std::string direction;
  int degree = 0;
};

struct DegreeTable {
  std::vector<DegreeCell> cells;
  bool constant = true;
};

// Evaluate weighted fiber degrees at every declared stratum sample, split by
// approach direction; constant iff all cells agree. Families without strata
// yield an empty, vacuously constant table. Requires ideal presentations.
DegreeTable check_degree_constancy(const Family& f, std::uint64_t seed = 1);

// --- certification ---------------------------------------------------------

enum class VerdictKind {
  agf_certified,            // all traced data regular up to the bounds
  continuous_only_evidence, // some trace irregular but integrally dependent
  not_cgf_evidence,         // degree jump, or a trace fails integrality
  undetermined,
};
std::string verdict_kind_str(VerdictKind k);

// One piece of traced data that failed the regularity test.
struct FlatWitness {
  std::string source;  // which traced monomial/form coefficient
  RatFunc value;
  RegularityResult regularity;
  std::optional<IntegralityResult> integrality;
  bool integrality_tested = false;
};

struct Verdict {
  VerdictKind kind = VerdictKind::undetermined;
  int degree = 0;  // generic covering degree
  int monomial_degree_bound = 0;
  int form_degree_bound = 0;
  DegreeTable degrees;
  std::vector<FlatWitness> witnesses;
  std::string detail;
};

struct CertifyOptions {
  int monomial_degree_bound = -1;  // default: 2 * generic degree
  int form_degree_bound = -1;      // default: number of chart variables
  int integrality_max_degree = 6;
  int integrality_coeff_bound = -1;  // default: per-value heuristic
  std::uint64_t seed = 1;
};

// Certify analytic geometric flatness by tracing all fiber monomials up to
// the monomial bound and (for branch-presented families) all monomial-times-
// wedge forms up to the form bound, then testing each traced coefficient for
// regularity on the base; irregular traces are retried for integral
// dependence to separate continuous-only evidence from failure.
Verdict certify_agf(const Family& f, const CertifyOptions& opts = {});

// --- weight search -----------------------------------------------------------

struct WeightAssignment {
  std::vector<int> weights;  // aligned with f.components
  int common_degree = 0;     // achieved constant weighted degree
};

// Search weight vectors (bounded by max_weight per component) making the
// weighted fiber cycles consistent: along every declared stratum, the
// weighted fiber cycle must not depend on the approach direction (compared
// through characteristic polynomials of sampled linear forms), and weighted
// degrees must agree across strata. Components indistinguishable by presence
// and fiber dimension across all strata are forced to share a weight. Returns
// the minimizer by total weight then lexicographic order, or nullopt.
std::optional<WeightAssignment> weight_search(const Family& f, int max_weight = 6,
                                              std::uint64_t seed = 1);

// --- cycle pullback ----------------------------------------------------------

// A target cycle on the base, given by a generic sample point per component
// (formal integer combinations are passed as several targets).
struct PullbackTarget {
  std::string name;
  int coefficient = 1;
  std::map<VarId, Rational> sample;  // base (and chart) assignment
};

// One multiplicity class of the preimage over a target sample: `points`
// preimage points sharing local covering multiplicity `multiplicity` (the
// target coefficient and component weight already multiplied in).
struct PullbackPart {
  std::string component;
  int multiplicity = 0;
  int points = 0;
};

struct PullbackResult {
  std::string target;
  std::vector<PullbackPart> parts;
  int degree = 0;  // total weighted degree of the pulled-back 0-cycle
};

std::vector<PullbackResult> cycle_pullback(const Family& f,
                                           const std::vector<PullbackTarget>& targets,
                                           int trials = 4, std::uint64_t seed = 1);

}  // namespace ct
