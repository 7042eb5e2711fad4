#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <comploc/constructions.hpp>
#include <comploc/majreduce.hpp>

#include "support.hpp"

using namespace comploc;
using Catch::Matchers::WithinAbs;

namespace
{

std::vector<unsigned> range( unsigned from, unsigned to )
{
  std::vector<unsigned> v;
  for ( auto i = from; i <= to; ++i )
    v.push_back( i );
  return v;
}

bool intersects( std::span<const unsigned> a, std::vector<unsigned> const& b )
{
  return std::any_of( a.begin(), a.end(), [&]( unsigned i ) { return std::find( b.begin(), b.end(), i ) != b.end(); } );
}

/* Pr over the band of weights [lo, hi] on nf variables that flipping one coordinate leaves it */
double band_escape( unsigned nf, unsigned lo, unsigned hi )
{
  double total = 0.0, escaping = 0.0;
  for ( auto w = lo; w <= hi; ++w )
  {
    auto const count = std::tgamma( nf + 1.0 ) / ( std::tgamma( w + 1.0 ) * std::tgamma( nf - w + 1.0 ) );
    total += count;
    /* a fixed coordinate is 1 with probability w / nf */
    if ( w == lo && lo > 0u )
      escaping += count * double( w ) / nf;
    if ( w == hi && hi < nf )
      escaping += count * double( nf - w ) / nf;
  }
  return escaping / total;
}

} // namespace

TEST_CASE( "split of the majority construction", "[majreduce]" )
{
  auto const c = build_maj( 12u, 3u );
  auto const s = split_variables( c, 2u );
  CHECK( s.control == std::vector<unsigned>{ 1u, 2u } );
  CHECK( s.buffer == std::vector<unsigned>{ 3u, 4u, 5u } );
  CHECK( s.free == range( 6u, 12u ) );
  CHECK( s.closure == range( 1u, 5u ) );
  CHECK( s.touching == std::vector<unsigned>{ 0u, 1u } );
  CHECK( no_mixing( c, s ) );

  CHECK_THROWS_AS( split_variables( c, 12u ), infeasible_error );
  CHECK_THROWS_AS( split_variables( c, 13u ), infeasible_error );
  CHECK_THROWS_AS( split_variables( c, 0u ), argument_error );
  CHECK_THROWS_AS( split_variables( build_hw( 4u, 2u ), 1u ), precondition_error );
}

TEST_CASE( "disjoint supports", "[majreduce]" )
{
  auto const c = build_maj( 9u, 1u );
  auto const s = split_variables( c, 1u );
  CHECK( s.control == std::vector<unsigned>{ 1u } );
  CHECK( s.closure == range( 1u, 3u ) );
  CHECK( s.free == range( 4u, 9u ) );
  CHECK( no_mixing( c, s ) );
}

TEST_CASE( "derived partial Hamming weight", "[majreduce]" )
{
  auto const c = build_maj( 12u, 3u );
  auto const s = split_variables( c, 2u );
  auto const r = derive_partial_hw( c, s );
  CHECK( r.num_free() == 7u );
  CHECK( r.s == 1u );
  CHECK( r.b == 1u );
  CHECK( r.lo == 2u );
  CHECK( r.hi == 5u );
  CHECK( r.derived.num_inners() == 6u );
  CHECK( r.derived.codomain_size() == 8u );
  CHECK( std::count( r.buffer_assignment.begin(), r.buffer_assignment.end(), true ) == 1 );

  auto const band = r.band();
  CHECK( band.size() == 21u + 35u + 35u + 21u );
  CHECK_FALSE( verify_against( r.derived, named_function( named_family::hw, 7u ), band ).has_value() );
  /* just outside the band the outer returns the clamp */
  auto const clamp = clamped_weight( 7u, 2u, 5u );
  for ( std::uint32_t x = 0u; x < 128u; ++x )
  {
    auto const v = r.derived.try_evaluate( x );
    REQUIRE( v.has_value() );
    CHECK( *v == clamp( x ) );
  }
}

TEST_CASE( "control fill does not change the reduction", "[majreduce]" )
{
  for ( auto [n, k, t] : { std::tuple{ 12u, 3u, 2u }, std::tuple{ 12u, 2u, 1u }, std::tuple{ 14u, 2u, 3u }, std::tuple{ 13u, 3u, 1u } } )
  {
    auto const c = build_maj( n, k );
    auto const s = split_variables( c, t );
    auto const a = derive_partial_hw( c, s, control_fill::lowest );
    auto const b = derive_partial_hw( c, s, control_fill::highest );
    REQUIRE( a.num_free() == b.num_free() );
    for ( std::uint32_t x = 0u; x < ( 1u << a.num_free() ); ++x )
      CHECK( a.derived.try_evaluate( x ) == b.derived.try_evaluate( x ) );
    CHECK( a.buffer_assignment == b.buffer_assignment );
  }
}

TEST_CASE( "reduction invariants across constructions", "[majreduce][property]" )
{
  unsigned feasible = 0u;
  for ( auto n = 5u; n <= 16u; ++n )
  {
    for ( auto k = 1u; k <= 4u; ++k )
    {
      auto const c = build_maj( n, k );
      for ( auto t = 1u; t <= 4u; ++t )
      {
        variable_split s;
        try
        {
          s = split_variables( c, t );
        }
        catch ( infeasible_error const& )
        {
          continue;
        }
        CHECK( s.control.size() == t );
        CHECK( s.closure.size() >= 2u * t + 1u );
        CHECK( 2u * s.closure.size() <= n );
        CHECK( s.control.size() + s.buffer.size() + s.free.size() == n );
        for ( auto const& g : c.inners() )
        {
          auto const sup = g.support();
          CHECK_FALSE( ( intersects( sup, s.control ) && intersects( sup, s.free ) ) );
        }
        CHECK( no_mixing( c, s ) );

        partial_hw r;
        try
        {
          r = derive_partial_hw( c, s );
        }
        catch ( infeasible_error const& )
        {
          continue;
        }
        ++feasible;
        auto const nf = r.num_free();
        CHECK( r.s == t / 2u );
        CHECK( int( r.b ) == int( ( n + 1u ) / 2u ) - int( ( nf + 1u ) / 2u ) - int( r.s ) );
        CHECK_FALSE( verify_against( r.derived, named_function( named_family::hw, nf ), r.band() ).has_value() );

        CHECK( band_escape( nf, r.lo, r.hi ) <= 2.0 / double( t + 2u ) + 1e-12 );
      }
    }
  }
  CHECK( feasible >= 10u );
}

TEST_CASE( "end-to-end pipeline", "[majreduce]" )
{
  auto const rep = end_to_end_pipeline( build_maj( 12u, 3u ), 2u );
  CHECK( rep.m == 6u );
  CHECK( rep.lemma.pass );
  CHECK( rep.info.n == 7u );
  double max_escape = 0.0;
  for ( auto const& v : rep.info.vars )
  {
    CHECK( v.escape <= 0.5 );
    max_escape = std::max( max_escape, v.escape );
  }
  CHECK_THAT( max_escape, WithinAbs( band_escape( 7u, 2u, 5u ), 1e-12 ) );
  CHECK( rep.free_deficit <= std::log2( 7.0 ) + 2.0 );
  CHECK_THAT( rep.free_deficit, WithinAbs( 7.0 - std::log2( 112.0 ), 1e-12 ) );
  double gap = 0.0;
  for ( auto const& e : rep.lemma.entries )
    gap += e.gap;
  CHECK_THAT( rep.gap_sum, WithinAbs( gap, 1e-12 ) );

  auto const again = end_to_end_pipeline( build_maj( 12u, 3u ), 2u );
  CHECK( again.reduction.split.control == rep.reduction.split.control );
  CHECK( again.reduction.buffer_assignment == rep.reduction.buffer_assignment );
  CHECK( again.reduction.derived.outer().entries() == rep.reduction.derived.outer().entries() );
}

TEST_CASE( "clamped weight", "[majreduce]" )
{
  auto const f = clamped_weight( 4u, 1u, 3u );
  CHECK( f( 0u ) == 1u );
  CHECK( f( 0b1111u ) == 3u );
  CHECK( f( 0b0101u ) == 2u );
  CHECK_THROWS_AS( clamped_weight( 4u, 3u, 2u ), argument_error );
  CHECK_THROWS_AS( clamped_weight( 4u, 1u, 5u ), argument_error );
}
