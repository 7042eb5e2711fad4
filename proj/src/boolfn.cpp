#include "comploc/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include <fmt/format.h>

namespace comploc
{

bit_vector::bit_vector( unsigned n, std::uint32_t bits ) : n_( n ), bits_( bits )
{
  detail::check_arity( n );
  if ( n < 32u && ( bits >> n ) != 0u )
  {
    throw argument_error( fmt::format( "bit pattern {:#x} does not fit in {} coordinates", bits, n ) );
  }
}

bit_vector bit_vector::from_string( std::string_view text )
{
  detail::check_arity( static_cast<unsigned>( text.size() ) );
  std::uint32_t bits = 0u;
  for ( auto i = 0u; i < text.size(); ++i )
  {
    if ( text[i] == '1' )
    {
      bits |= 1u << i;
    }
    else if ( text[i] != '0' )
    {
      throw parse_error( fmt::format( "invalid character '{}' in bit string '{}'", text[i], text ) );
    }
  }
  return bit_vector( static_cast<unsigned>( text.size() ), bits );
}

bool bit_vector::operator[]( unsigned i ) const
{
  if ( i < 1u || i > n_ )
  {
    throw argument_error( fmt::format( "coordinate {} outside 1..{}", i, n_ ) );
  }
  return ( bits_ >> ( i - 1u ) ) & 1u;
}

std::string bit_vector::to_string() const
{
  std::string s( n_, '0' );
  for ( auto i = 0u; i < n_; ++i )
  {
    if ( ( bits_ >> i ) & 1u )
    {
      s[i] = '1';
    }
  }
  return s;
}

bit_vector flip_bit( bit_vector const& x, unsigned i )
{
  (void)x[i];
  return bit_vector( x.size(), x.bits() ^ ( 1u << ( i - 1u ) ) );
}

bit_vector set_bit( bit_vector const& x, unsigned i, bool b )
{
  (void)x[i];
  auto const mask = 1u << ( i - 1u );
  return bit_vector( x.size(), b ? ( x.bits() | mask ) : ( x.bits() & ~mask ) );
}

unsigned hamming_weight( bit_vector const& x )
{
  return static_cast<unsigned>( std::popcount( x.bits() ) );
}

bit_vector complement( bit_vector const& x )
{
  auto const mask = x.size() == 32u ? ~0u : ( ( 1u << x.size() ) - 1u );
  return bit_vector( x.size(), ~x.bits() & mask );
}

truth_table::truth_table( unsigned n, unsigned codomain_size, generator const& fn ) : n_( n ), d_( codomain_size )
{
  detail::check_arity( n );
  if ( codomain_size < 2u || codomain_size > 256u )
  {
    throw sizing_error( fmt::format( "codomain size {} outside 2..256", codomain_size ) );
  }
  auto const points = num_points();
  if ( d_ == 2u )
  {
    bits_.assign( ( points + 63u ) / 64u, 0u );
  }
  else
  {
    values_.assign( points, 0u );
  }
  for ( std::uint64_t x = 0u; x < points; ++x )
  {
    auto const v = fn( static_cast<std::uint32_t>( x ) );
    if ( v >= d_ )
    {
      throw argument_error( fmt::format( "value {} at input {} outside codomain of size {}", v, x, d_ ) );
    }
    if ( d_ == 2u )
    {
      bits_[x >> 6] |= std::uint64_t( v ) << ( x & 63u );
    }
    else
    {
      values_[x] = static_cast<std::uint8_t>( v );
    }
  }
}

unsigned truth_table::operator()( bit_vector const& x ) const
{
  if ( x.size() != n_ )
  {
    throw argument_error( fmt::format( "input of arity {} given to a {}-ary table", x.size(), n_ ) );
  }
  return ( *this )( x.bits() );
}

std::span<const std::uint64_t> truth_table::packed_bits() const
{
  if ( d_ != 2u )
  {
    throw argument_error( "packed bits requested from a non-binary table" );
  }
  return bits_;
}

named_family parse_family( std::string_view name )
{
  if ( name == "parity" )
    return named_family::parity;
  if ( name == "hw" )
    return named_family::hw;
  if ( name == "maj" )
    return named_family::maj;
  throw argument_error( fmt::format( "unknown function family '{}'", name ) );
}

std::string_view family_name( named_family family ) noexcept
{
  switch ( family )
  {
  case named_family::parity:
    return "parity";
  case named_family::hw:
    return "hw";
  case named_family::maj:
    return "maj";
  }
  return "?";
}

truth_table named_function( named_family family, unsigned n )
{
  detail::check_arity( n );
  switch ( family )
  {
  case named_family::parity:
    return truth_table( n, 2u, []( std::uint32_t x ) { return static_cast<unsigned>( std::popcount( x ) & 1 ); } );
  case named_family::hw:
    return truth_table( n, n + 1u, []( std::uint32_t x ) { return static_cast<unsigned>( std::popcount( x ) ); } );
  case named_family::maj:
    /* |x| >= n/2, ties included */
    return truth_table( n, 2u, [n]( std::uint32_t x ) { return 2u * std::popcount( x ) >= n ? 1u : 0u; } );
  }
  throw argument_error( "unknown function family" );
}

truth_table restrict( truth_table const& f, std::span<const unsigned> keep, std::map<unsigned, bool> const& fixing )
{
  auto const n = f.num_vars();
  if ( keep.empty() )
  {
    throw argument_error( "restriction must keep at least one coordinate" );
  }
  std::set<unsigned> kept;
  for ( auto i : keep )
  {
    if ( i < 1u || i > n || !kept.insert( i ).second )
    {
      throw argument_error( fmt::format( "kept coordinate {} out of range or repeated", i ) );
    }
  }
  std::uint32_t base = 0u;
  for ( auto const& [i, b] : fixing )
  {
    if ( i < 1u || i > n || kept.count( i ) )
    {
      throw argument_error( fmt::format( "fixing of coordinate {} overlaps the kept set or is out of range", i ) );
    }
    if ( b )
    {
      base |= 1u << ( i - 1u );
    }
  }
  if ( kept.size() + fixing.size() != n )
  {
    throw argument_error( "fixing does not cover every coordinate outside the kept set" );
  }

  std::vector<unsigned> order( kept.begin(), kept.end() );
  auto const r = static_cast<unsigned>( order.size() );
  return truth_table( r, f.codomain_size(), [&]( std::uint32_t y ) {
    auto x = base;
    for ( auto t = 0u; t < r; ++t )
    {
      if ( ( y >> t ) & 1u )
      {
        x |= 1u << ( order[t] - 1u );
      }
    }
    return f( x );
  } );
}

bool depends_on( truth_table const& f, unsigned i )
{
  if ( i < 1u || i > f.num_vars() )
  {
    throw argument_error( fmt::format( "coordinate {} outside 1..{}", i, f.num_vars() ) );
  }
  auto const mask = 1u << ( i - 1u );
  for ( std::uint64_t x = 0u; x < f.num_points(); ++x )
  {
    auto const xx = static_cast<std::uint32_t>( x );
    if ( ( xx & mask ) == 0u && f( xx ) != f( xx | mask ) )
    {
      return true;
    }
  }
  return false;
}

} // namespace comploc
