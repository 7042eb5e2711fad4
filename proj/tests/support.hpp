/* Test helpers: random generators and brute-force oracles that avoid the
   library code paths they are used to check. */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <comploc/composition.hpp>

namespace testing
{

inline unsigned weight_of( std::uint32_t x, unsigned n )
{
  unsigned w = 0u;
  for ( auto i = 0u; i < n; ++i )
    w += ( x >> i ) & 1u;
  return w;
}

inline bool bit_of( std::uint32_t x, unsigned i )
{
  return ( x >> ( i - 1u ) ) & 1u;
}

/* inner outputs as a string, computed directly from the tables */
inline std::string inner_string( comploc::composition const& c, std::uint32_t x )
{
  std::string s;
  for ( auto const& g : c.inners() )
  {
    std::uint32_t a = 0u;
    auto const sup = g.support();
    for ( auto t = 0u; t < sup.size(); ++t )
      a |= static_cast<std::uint32_t>( bit_of( x, sup[t] ) ) << t;
    s.push_back( ( ( g.table()[a >> 6] >> ( a & 63u ) ) & 1u ) ? '1' : '0' );
  }
  return s;
}

inline double plogp( double p )
{
  return p > 0.0 ? p * std::log2( p ) : 0.0;
}

/* I[X_i : g(X)] for X uniform on the given points, from the joint distribution of (X_i, g(X)) */
inline double brute_information( comploc::composition const& c, std::vector<std::uint32_t> const& points, unsigned i )
{
  std::map<std::pair<int, std::string>, double> joint;
  std::map<int, double> px;
  std::map<std::string, double> pg;
  auto const p = 1.0 / static_cast<double>( points.size() );
  for ( auto x : points )
  {
    auto const g = inner_string( c, x );
    auto const xi = static_cast<int>( bit_of( x, i ) );
    joint[{ xi, g }] += p;
    px[xi] += p;
    pg[g] += p;
  }
  double mi = 0.0;
  for ( auto const& [key, pj] : joint )
  {
    mi += pj * std::log2( pj / ( px[key.first] * pg[key.second] ) );
  }
  return mi;
}

inline std::vector<std::uint32_t> all_points( unsigned n )
{
  std::vector<std::uint32_t> v( std::size_t( 1 ) << n );
  for ( std::uint32_t x = 0u; x < v.size(); ++x )
    v[x] = x;
  return v;
}

inline comploc::local_function random_local( std::mt19937_64& rng, std::vector<unsigned> support )
{
  std::sort( support.begin(), support.end() );
  std::uniform_int_distribution<std::uint64_t> bits;
  return comploc::local_function::from_callable( support, [&, table = bits( rng )]( std::uint32_t a ) { return ( table >> a ) & 1u; } );
}

inline std::vector<unsigned> random_support( std::mt19937_64& rng, unsigned n, unsigned size )
{
  std::vector<unsigned> all( n );
  for ( auto i = 0u; i < n; ++i )
    all[i] = i + 1u;
  std::shuffle( all.begin(), all.end(), rng );
  all.resize( size );
  std::sort( all.begin(), all.end() );
  return all;
}

/* outer map built by direct enumeration: key -> target value, failing on conflicts */
template<typename Target>
comploc::composition assemble( unsigned n, unsigned k, std::vector<comploc::local_function> inners, unsigned d, Target&& target )
{
  comploc::composition probe( n, k, inners, comploc::outer_function( static_cast<unsigned>( inners.size() ), d, {} ) );
  std::map<comploc::output_key, unsigned> entries;
  for ( std::uint32_t x = 0u; x < ( 1u << n ); ++x )
  {
    auto key = comploc::output_key::from_string( inner_string( probe, x ) );
    auto const [it, inserted] = entries.emplace( key, target( x ) );
    if ( !inserted && it->second != static_cast<unsigned>( target( x ) ) )
      throw std::logic_error( "assemble: inner outputs do not determine the target" );
  }
  return comploc::composition( n, k, std::move( inners ), comploc::outer_function( static_cast<unsigned>( probe.num_inners() ), d, std::move( entries ) ) );
}

/* HW_n composition: random blocks of size <= k emitting binary block sums,
   plus a few random noise inners, in shuffled order */
inline comploc::composition random_hw_composition( std::mt19937_64& rng, unsigned n, unsigned k )
{
  std::vector<unsigned> perm( n );
  for ( auto i = 0u; i < n; ++i )
    perm[i] = i + 1u;
  std::shuffle( perm.begin(), perm.end(), rng );
  std::vector<comploc::local_function> inners;
  for ( auto pos = 0u; pos < n; )
  {
    auto const size = std::min( n - pos, std::uniform_int_distribution<unsigned>( 1u, k )( rng ) );
    std::vector<unsigned> block( perm.begin() + pos, perm.begin() + pos + size );
    std::sort( block.begin(), block.end() );
    pos += size;
    unsigned digits = 0u;
    while ( ( 1u << digits ) <= size )
      ++digits;
    for ( auto b = 0u; b < digits; ++b )
    {
      inners.push_back( comploc::local_function::from_callable( block, [b, s = block.size()]( std::uint32_t a ) {
        return ( ( weight_of( a, static_cast<unsigned>( s ) ) >> b ) & 1u ) != 0u;
      } ) );
    }
  }
  auto const noise = std::uniform_int_distribution<unsigned>( 0u, 2u )( rng );
  for ( auto t = 0u; t < noise; ++t )
  {
    auto const size = std::uniform_int_distribution<unsigned>( 1u, std::min( k, n ) )( rng );
    inners.push_back( random_local( rng, random_support( rng, n, size ) ) );
  }
  std::shuffle( inners.begin(), inners.end(), rng );
  return assemble( n, k, std::move( inners ), n + 1u, [n]( std::uint32_t x ) { return weight_of( x, n ); } );
}

/* binary composition with random inners and a random outer on reachable vectors */
inline comploc::composition random_binary_composition( std::mt19937_64& rng, unsigned n, unsigned k, unsigned m )
{
  std::vector<comploc::local_function> inners;
  for ( auto j = 0u; j < m; ++j )
  {
    auto const size = std::uniform_int_distribution<unsigned>( 1u, std::min( k, n ) )( rng );
    inners.push_back( random_local( rng, random_support( rng, n, size ) ) );
  }
  comploc::composition probe( n, k, inners, comploc::outer_function( m, 2u, {} ) );
  std::map<comploc::output_key, unsigned> entries;
  std::bernoulli_distribution coin;
  for ( std::uint32_t x = 0u; x < ( 1u << n ); ++x )
  {
    auto key = comploc::output_key::from_string( inner_string( probe, x ) );
    if ( !entries.count( key ) )
      entries.emplace( key, coin( rng ) ? 1u : 0u );
  }
  return comploc::composition( n, k, std::move( inners ), comploc::outer_function( m, 2u, std::move( entries ) ) );
}

} // namespace testing
