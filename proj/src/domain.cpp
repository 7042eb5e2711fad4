#include "comploc/domain.hpp"

#include <algorithm>
#include <bit>

#include <fmt/format.h>

namespace comploc
{

namespace
{

std::vector<std::uint64_t> empty_words( unsigned n )
{
  return std::vector<std::uint64_t>( ( ( std::uint64_t( 1 ) << n ) + 63u ) / 64u, 0u );
}

} // namespace

domain domain::full( unsigned n )
{
  return weight_band( n, 0u, n );
}

domain domain::weight_band( unsigned n, unsigned lo, unsigned hi )
{
  detail::check_arity( n );
  if ( lo > hi || lo > n )
  {
    throw argument_error( fmt::format( "empty weight band {}:{} for arity {}", lo, hi, n ) );
  }
  domain d;
  d.n_ = n;
  d.words_ = empty_words( n );
  for ( std::uint64_t x = 0u; x < ( std::uint64_t( 1 ) << n ); ++x )
  {
    auto const w = static_cast<unsigned>( std::popcount( x ) );
    if ( w >= lo && w <= hi )
    {
      d.words_[x >> 6] |= std::uint64_t( 1 ) << ( x & 63u );
      ++d.size_;
    }
  }
  return d;
}

domain domain::from_mask( unsigned n, std::vector<bool> mask )
{
  detail::check_arity( n );
  if ( mask.size() != ( std::size_t( 1 ) << n ) )
  {
    throw argument_error( fmt::format( "domain mask has {} entries, expected 2^{}", mask.size(), n ) );
  }
  domain d;
  d.n_ = n;
  d.words_ = empty_words( n );
  for ( std::size_t x = 0u; x < mask.size(); ++x )
  {
    if ( mask[x] )
    {
      d.words_[x >> 6] |= std::uint64_t( 1 ) << ( x & 63u );
      ++d.size_;
    }
  }
  if ( d.size_ == 0u )
  {
    throw argument_error( "domain must be nonempty" );
  }
  return d;
}

std::vector<std::uint32_t> domain::lex_members() const
{
  std::vector<std::uint32_t> out;
  out.reserve( size_ );
  for ( std::uint64_t r = 0u; r < ( std::uint64_t( 1 ) << n_ ); ++r )
  {
    auto const x = detail::reverse_bits( static_cast<std::uint32_t>( r ), n_ );
    if ( contains( x ) )
    {
      out.push_back( x );
    }
  }
  return out;
}

} // namespace comploc
