/*!
  \file search.hpp
  \brief Exact composition complexity of tiny functions by exhaustive search

  Inner candidates are pairs (support, table) with |support| <= k, tables
  that depend on every support coordinate, and the table bit at the all-zero
  assignment equal to 0 (the outer map absorbs negations).  For each m the
  search walks m-subsets of candidates in lexicographic order, refining the
  partition of the cube by inner outputs, so the first hit is the
  lexicographically least witness.
*/

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boolfn.hpp"
#include "composition.hpp"

namespace comploc
{

inline constexpr unsigned search_max_vars = 6u;
inline constexpr unsigned search_max_locality = 3u;

struct search_budget
{
  unsigned m_max = 0u;                   ///< 0 means n (always feasible with singleton inners)
  std::uint64_t node_limit = 200'000'000u;
  double time_limit = 120.0;             ///< seconds
};

enum class level_status
{
  infeasible,
  feasible,
  inconclusive
};

struct level_outcome
{
  unsigned m = 0u;
  level_status status = level_status::inconclusive;
  std::uint64_t nodes = 0u;
  bool filter_refuted = false; ///< lower_bound_refinement also rules this m out
};

struct search_result
{
  std::optional<unsigned> m_star;       ///< empty when inconclusive
  std::optional<composition> witness;   ///< verified on the full cube
  unsigned proven_lower_bound = 0u;     ///< every m below this is infeasible
  std::vector<level_outcome> levels;    ///< one per m examined, ascending
  std::uint64_t candidates = 0u;
  std::uint64_t nodes = 0u;
  std::string reason;                   ///< why the search stopped without an answer

  bool conclusive() const noexcept { return m_star.has_value(); }
};

/*! \brief Least m with f = h(g_1, ..., g_m) and every g_j k-local

  Requires n <= 6, k <= 3 (sizing_error) and that f depends on every
  coordinate (precondition_error).  Levels below ceil(n/k) are skipped since
  the supports could not cover [n].
*/
search_result exact_cc( truth_table const& f, unsigned k, search_budget const& budget = {} );

enum class refinement_verdict
{
  refuted,
  possible
};

/*! \brief Necessary condition on the supports of any m-inner composition

  For every set S of coordinates, the inners touching S must take at least
  r(S) joint values, where r(S) is the largest number of f values reachable
  by varying S with the rest fixed.  Support families of m sets of size
  min(k, n) covering [n] are enumerated; if none meets every subset
  condition, m is refuted.
*/
refinement_verdict lower_bound_refinement( truth_table const& f, unsigned k, unsigned m );

} // namespace comploc
