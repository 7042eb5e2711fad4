/*!
  \file branching.hpp
  \brief Layered bounded-width branching programs and their reduction to compositions
*/

#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "composition.hpp"

namespace comploc
{

struct bp_layer
{
  unsigned var = 1u;               ///< coordinate read by this layer
  std::vector<unsigned> delta0;    ///< next state when x_var = 0
  std::vector<unsigned> delta1;    ///< next state when x_var = 1

  bool operator==( bp_layer const& ) const = default;
};

/*! \brief Width-w program; states are 0..w-1 */
class branching_program
{
public:
  branching_program() = default;
  branching_program( unsigned n, unsigned width, std::vector<bp_layer> layers, unsigned start, std::set<unsigned> accept );

  unsigned num_vars() const noexcept { return n_; }
  unsigned width() const noexcept { return w_; }
  unsigned length() const noexcept { return static_cast<unsigned>( layers_.size() ); }
  std::vector<bp_layer> const& layers() const noexcept { return layers_; }
  unsigned start() const noexcept { return start_; }
  std::set<unsigned> const& accept() const noexcept { return accept_; }

  /*! \brief State reached from `state` after layers [first, last) on input x */
  unsigned run( std::uint32_t x, unsigned state, unsigned first, unsigned last ) const noexcept
  {
    for ( auto t = first; t < last; ++t )
    {
      auto const& layer = layers_[t];
      state = ( ( x >> ( layer.var - 1u ) ) & 1u ) ? layer.delta1[state] : layer.delta0[state];
    }
    return state;
  }

  bool operator==( branching_program const& ) const = default;

private:
  unsigned n_ = 0u;
  unsigned w_ = 2u;
  std::vector<bp_layer> layers_;
  unsigned start_ = 0u;
  std::set<unsigned> accept_;
};

bool bp_evaluate( branching_program const& bp, bit_vector const& x );

/*! \brief Table of the program over the whole cube */
truth_table bp_truth_table( branching_program const& bp );

/*! \brief Width-2 parity automaton reading x_1..x_n in order */
branching_program parity_bp( unsigned n );

/*! \brief Width-w counter of ones modulo w reading x_1..x_n; accepts count = 0 mod w */
branching_program mod_counter_bp( unsigned n, unsigned width );

/*! \brief Cuts the layers into ceil(L/k) segments of at most k layers

  For each segment and start state, ceil(log2 w) inners give the end state in
  binary (least-significant bit first); inners are ordered by segment, then
  start state, then bit.  The outer chains the decoded segment maps from the
  start state and tests acceptance.
*/
composition bp_to_composition( branching_program const& bp, unsigned k );

/*! \brief ceil(log2 w) */
unsigned state_bits( unsigned width ) noexcept;

} // namespace comploc
