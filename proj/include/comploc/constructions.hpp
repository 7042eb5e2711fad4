/*!
  \file constructions.hpp
  \brief Block-splitting upper-bound constructions for parity, Hamming weight and majority
*/

#pragma once

#include <vector>

#include "composition.hpp"

namespace comploc
{

/*! \brief Partition of [n] into consecutive blocks of size k, the last one taking the remainder */
struct group_split
{
  std::vector<std::vector<unsigned>> groups;
};

group_split split_into_groups( unsigned n, unsigned k );

/*! \brief ceil(log2(s + 1)): binary digits needed for a block sum in 0..s */
unsigned sum_digits( unsigned s ) noexcept;

/*! \brief One XOR inner per block, outer XOR; m = ceil(n/k) */
composition build_parity( unsigned n, unsigned k );

/*! \brief Per block of size s, ceil(log2(s+1)) inners emitting the block sum in binary

  Digits are listed least-significant first.  The outer decodes and adds the
  block sums; codomain size n + 1.
*/
composition build_hw( unsigned n, unsigned k );

/*! \brief Inners of build_hw; outer outputs 1 iff the decoded sum is at least n/2 */
composition build_maj( unsigned n, unsigned k );

} // namespace comploc
