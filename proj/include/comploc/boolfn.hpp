/*!
  \file boolfn.hpp
  \brief Explicit functions on the n-cube and the elementary input manipulations

  Inputs are encoded as integers where coordinate 1 is the least-significant
  bit.  Text renderings list coordinate 1 first, so `0100` is the input with
  only x_2 set.  The lexicographic order used for witnesses is the order of
  these strings.
*/

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace comploc
{

inline constexpr unsigned max_arity = 24u;

/*! \brief Point of the n-cube, 1 <= n <= 24, coordinates addressed 1..n */
class bit_vector
{
public:
  bit_vector() = default;
  bit_vector( unsigned n, std::uint32_t bits = 0u );

  /*! \brief Parses a 0/1 string with coordinate 1 first */
  static bit_vector from_string( std::string_view text );

  unsigned size() const noexcept { return n_; }
  std::uint32_t bits() const noexcept { return bits_; }

  /*! \brief Coordinate i (1-based) */
  bool operator[]( unsigned i ) const;

  std::string to_string() const;

  bool operator==( bit_vector const& ) const = default;

private:
  unsigned n_ = 0u;
  std::uint32_t bits_ = 0u;
};

bit_vector flip_bit( bit_vector const& x, unsigned i );
bit_vector set_bit( bit_vector const& x, unsigned i, bool b );
unsigned hamming_weight( bit_vector const& x );
bit_vector complement( bit_vector const& x );

namespace detail
{

/* reverses the low n bits; maps integer order to string order */
inline std::uint32_t reverse_bits( std::uint32_t x, unsigned n ) noexcept
{
  std::uint32_t r = 0u;
  for ( auto i = 0u; i < n; ++i )
  {
    r = ( r << 1 ) | ( ( x >> i ) & 1u );
  }
  return r;
}

inline void check_arity( unsigned n )
{
  if ( n < 1u || n > max_arity )
  {
    throw sizing_error( "arity " + std::to_string( n ) + " outside supported range 1.." + std::to_string( max_arity ) );
  }
}

} // namespace detail

/*! \brief Lexicographic order of the coordinate-1-first string rendering */
inline bool lex_less( std::uint32_t a, std::uint32_t b, unsigned n ) noexcept
{
  return detail::reverse_bits( a, n ) < detail::reverse_bits( b, n );
}

/*! \brief Full table of a function {0,1}^n -> {0,...,d-1}

  Binary functions are stored bit-packed, 64 inputs per word; wider codomains
  use one byte per input.  Tables are immutable once built.
*/
class truth_table
{
public:
  using generator = std::function<unsigned( std::uint32_t )>;

  truth_table() = default;

  /*! \brief Tabulates `fn` on all 2^n inputs; every value must be below `codomain_size` */
  truth_table( unsigned n, unsigned codomain_size, generator const& fn );

  unsigned num_vars() const noexcept { return n_; }
  unsigned codomain_size() const noexcept { return d_; }
  std::uint64_t num_points() const noexcept { return std::uint64_t( 1 ) << n_; }
  bool is_binary() const noexcept { return d_ == 2u; }

  unsigned operator()( std::uint32_t x ) const noexcept
  {
    if ( d_ == 2u )
    {
      return static_cast<unsigned>( ( bits_[x >> 6] >> ( x & 63u ) ) & 1u );
    }
    return values_[x];
  }
  unsigned operator()( bit_vector const& x ) const;

  /*! \brief Packed words of a binary table (bit x of the table is input x) */
  std::span<const std::uint64_t> packed_bits() const;

  bool operator==( truth_table const& ) const = default;

private:
  unsigned n_ = 0u;
  unsigned d_ = 2u;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint8_t> values_;
};

enum class named_family
{
  parity,
  hw,
  maj
};

named_family parse_family( std::string_view name );
std::string_view family_name( named_family family ) noexcept;

/*! \brief Parity_n, HW_n (codomain n+1) or Maj_n (1 iff |x| >= n/2) */
truth_table named_function( named_family family, unsigned n );

/*! \brief Subfunction on the coordinates `keep` (ascending order preserved)

  `fixing` must assign exactly the coordinates outside `keep`.  Coordinate
  keep[0] becomes coordinate 1 of the result.
*/
truth_table restrict( truth_table const& f, std::span<const unsigned> keep, std::map<unsigned, bool> const& fixing );

/*! \brief True if some input differs in value from its i-flip */
bool depends_on( truth_table const& f, unsigned i );

} // namespace comploc
