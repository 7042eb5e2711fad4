#include "comploc/constructions.hpp"

#include <bit>

#include <fmt/format.h>

namespace comploc
{

namespace
{

void check_parameters( unsigned n, unsigned k )
{
  detail::check_arity( n );
  if ( k < 1u || k > n )
  {
    throw sizing_error( fmt::format( "locality k = {} outside 1..n = {}", k, n ) );
  }
}

struct sum_layout
{
  std::vector<local_function> inners;
  std::vector<unsigned> block_sizes;
  std::vector<unsigned> first_digit; /* index of each block's least-significant digit */
};

sum_layout block_sum_inners( unsigned n, unsigned k )
{
  sum_layout layout;
  for ( auto const& block : split_into_groups( n, k ).groups )
  {
    auto const s = static_cast<unsigned>( block.size() );
    layout.block_sizes.push_back( s );
    layout.first_digit.push_back( static_cast<unsigned>( layout.inners.size() ) );
    for ( auto digit = 0u; digit < sum_digits( s ); ++digit )
    {
      layout.inners.push_back( local_function::from_callable( block, [digit]( std::uint32_t a ) {
        return ( ( std::popcount( a ) >> digit ) & 1u ) != 0u;
      } ) );
    }
  }
  return layout;
}

/* enumerates every combination of block sums: these are exactly the reachable inner-output vectors */
template<typename Fn>
void for_each_block_sum( sum_layout const& layout, Fn&& fn )
{
  auto const m = static_cast<unsigned>( layout.inners.size() );
  std::vector<unsigned> sums( layout.block_sizes.size(), 0u );
  while ( true )
  {
    output_key key( m );
    unsigned total = 0u;
    for ( auto b = 0u; b < sums.size(); ++b )
    {
      total += sums[b];
      for ( auto digit = 0u; digit < sum_digits( layout.block_sizes[b] ); ++digit )
      {
        key.set( layout.first_digit[b] + digit, ( sums[b] >> digit ) & 1u );
      }
    }
    fn( key, total );

    auto b = 0u;
    while ( b < sums.size() && sums[b] == layout.block_sizes[b] )
    {
      sums[b++] = 0u;
    }
    if ( b == sums.size() )
      break;
    ++sums[b];
  }
}

} // namespace

group_split split_into_groups( unsigned n, unsigned k )
{
  check_parameters( n, k );
  group_split split;
  for ( auto start = 1u; start <= n; start += k )
  {
    auto& block = split.groups.emplace_back();
    for ( auto i = start; i < start + k && i <= n; ++i )
    {
      block.push_back( i );
    }
  }
  return split;
}

unsigned sum_digits( unsigned s ) noexcept
{
  return static_cast<unsigned>( std::bit_width( s ) );
}

composition build_parity( unsigned n, unsigned k )
{
  std::vector<local_function> inners;
  for ( auto const& block : split_into_groups( n, k ).groups )
  {
    inners.push_back( local_function::from_callable( block, []( std::uint32_t a ) { return ( std::popcount( a ) & 1 ) != 0; } ) );
  }

  /* every parity pattern of the blocks is reachable */
  auto const m = static_cast<unsigned>( inners.size() );
  std::map<output_key, unsigned> entries;
  for ( std::uint64_t pattern = 0u; pattern < ( std::uint64_t( 1 ) << m ); ++pattern )
  {
    output_key key( m );
    for ( auto j = 0u; j < m; ++j )
    {
      key.set( j, ( pattern >> j ) & 1u );
    }
    entries.emplace( std::move( key ), static_cast<unsigned>( std::popcount( pattern ) & 1 ) );
  }
  return composition( n, k, std::move( inners ), outer_function( m, 2u, std::move( entries ) ) );
}

composition build_hw( unsigned n, unsigned k )
{
  auto layout = block_sum_inners( n, k );
  auto const m = static_cast<unsigned>( layout.inners.size() );
  std::map<output_key, unsigned> entries;
  for_each_block_sum( layout, [&]( output_key const& key, unsigned total ) { entries.emplace( key, total ); } );
  return composition( n, k, std::move( layout.inners ), outer_function( m, n + 1u, std::move( entries ) ) );
}

composition build_maj( unsigned n, unsigned k )
{
  auto layout = block_sum_inners( n, k );
  auto const m = static_cast<unsigned>( layout.inners.size() );
  std::map<output_key, unsigned> entries;
  for_each_block_sum( layout, [&]( output_key const& key, unsigned total ) { entries.emplace( key, 2u * total >= n ? 1u : 0u ); } );
  return composition( n, k, std::move( layout.inners ), outer_function( m, 2u, std::move( entries ) ) );
}

} // namespace comploc
