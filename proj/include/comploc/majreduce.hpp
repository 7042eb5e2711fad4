/*!
  \file majreduce.hpp
  \brief From a composition for majority to Hamming weight on a weight band

  A few control coordinates are replayed over every weight, buffer
  coordinates are fixed to balance the input, and what remains computes the
  weight of the free coordinates inside a band around n_free / 2.
*/

#pragma once

#include <vector>

#include "composition.hpp"
#include "domain.hpp"
#include "infoflow.hpp"

namespace comploc
{

struct variable_split
{
  unsigned n = 0u;
  unsigned t = 0u;
  std::vector<unsigned> control;  ///< ascending
  std::vector<unsigned> buffer;   ///< closure minus control, ascending
  std::vector<unsigned> free;     ///< [n] minus closure, ascending
  std::vector<unsigned> closure;  ///< variables read by the inners touching control, padded
  std::vector<unsigned> touching; ///< 0-based indices of the inners touching control
};

/*! \brief Greedy closure-minimizing choice of t control variables

  Requires c to compute Maj_n on the full cube (precondition_error) and the
  padded closure to have at most n/2 elements (infeasible_error).
*/
variable_split split_variables( composition const& c, unsigned t );

/*! \brief True when no inner reads both a free and a control coordinate */
bool no_mixing( composition const& c, variable_split const& split );

enum class control_fill
{
  lowest, ///< weight w sets the w lowest-index control coordinates
  highest
};

struct partial_hw
{
  composition derived;                  ///< over the free coordinates, renumbered 1..n_free
  variable_split split;
  unsigned s = 0u;                      ///< floor(t / 2)
  unsigned lo = 0u;                     ///< band is [lo, hi]
  unsigned hi = 0u;
  unsigned b = 0u;                      ///< weight of the buffer assignment
  std::vector<bool> buffer_assignment;  ///< aligned with split.buffer

  unsigned num_free() const noexcept { return static_cast<unsigned>( split.free.size() ); }
  domain band() const { return domain::weight_band( num_free(), lo, hi ); }
};

/*! \brief The derived composition; verified on the band before returning

  Its value is the free weight clamped to [lo, hi].  Throws infeasible_error
  when b or the band falls outside the admissible range.
*/
partial_hw derive_partial_hw( composition const& c, variable_split const& split, control_fill fill = control_fill::lowest );

/*! \brief min(max(w, lo), hi) as a truth table on n_free variables */
truth_table clamped_weight( unsigned n, unsigned lo, unsigned hi );

struct pipeline_report
{
  partial_hw reduction;
  info_report info;
  key_lemma_report lemma;
  unsigned m = 0u;           ///< inners of the derived composition
  double free_deficit = 0.0; ///< n_free - log2 |D|
  double gap_sum = 0.0;      ///< sum of 1 + escape_i - H[X_i | g]
};

pipeline_report end_to_end_pipeline( composition const& c, unsigned t );

} // namespace comploc
