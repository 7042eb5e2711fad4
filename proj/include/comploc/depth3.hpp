/*!
  \file depth3.hpp
  \brief Lowering a composition to a depth-3 circuit with shared bottom gates

  In sigma3 polarity the top OR ranges over the accepted inner-output
  vectors, each middle AND collects the maxterm CNF clauses of g_j or of its
  negation, and bottom OR clauses are shared between terms.  Pi3 is the dual
  built from minterm DNFs and the rejected vectors.  Unit clauses feed the
  middle layer directly as literals.
*/

#pragma once

#include <cstdint>
#include <vector>

#include "composition.hpp"

namespace comploc
{

enum class polarity
{
  sigma3, ///< OR of ANDs of ORs
  pi3     ///< AND of ORs of ANDs
};

polarity parse_polarity( std::string_view name );
std::string_view polarity_name( polarity p ) noexcept;

/*! \brief Signed literal: +i is x_i, -i is its negation */
using literal = int;

struct middle_gate
{
  std::vector<unsigned> bottom; ///< indices into depth3_circuit::bottom
  std::vector<literal> literals;

  bool operator==( middle_gate const& ) const = default;
};

struct depth3_circuit
{
  unsigned n = 0u;
  unsigned bottom_fanin = 0u;  ///< the locality k of the source
  polarity kind = polarity::sigma3;
  std::vector<std::vector<literal>> bottom; ///< sorted literal lists, pairwise distinct
  std::vector<middle_gate> middle;          ///< the top gate reads every middle gate

  bool operator==( depth3_circuit const& ) const = default;
};

struct depth3_size
{
  std::uint64_t gate_count = 0u; ///< bottom gates + middle gates + 1 root
  unsigned bottom_fanin = 0u;    ///< widest bottom gate
  std::uint64_t top_fanin = 0u;
};

inline constexpr unsigned depth3_max_vars = 12u;
inline constexpr unsigned depth3_max_inners = 14u;

/*! \brief Builds the circuit; requires binary codomain, n <= 12 and m <= 14 */
depth3_circuit composition_to_depth3( composition const& c, polarity p );

bool depth3_evaluate( depth3_circuit const& d, bit_vector const& x );
bool depth3_evaluate( depth3_circuit const& d, std::uint32_t x );

depth3_size measure( depth3_circuit const& d );

/*! \brief The same composition with every outer value flipped (binary codomain) */
composition negate_outer( composition const& c );

} // namespace comploc
