#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <comploc/boolfn.hpp>
#include <comploc/domain.hpp>

#include "support.hpp"

using namespace comploc;

TEST_CASE( "bit vectors print coordinate 1 first", "[boolfn]" )
{
  auto const x = bit_vector::from_string( "0100" );
  CHECK( x.bits() == 0b0010u );
  CHECK( x[2] );
  CHECK_FALSE( x[1] );
  CHECK( x.to_string() == "0100" );
  CHECK_THROWS_AS( x[0], argument_error );
  CHECK_THROWS_AS( x[5], argument_error );
  CHECK_THROWS_AS( bit_vector::from_string( "01x" ), parse_error );
  CHECK_THROWS_AS( bit_vector( 25u ), sizing_error );
}

TEST_CASE( "flip_bit", "[boolfn]" )
{
  CHECK( flip_bit( bit_vector::from_string( "0000" ), 2u ).to_string() == "0100" );
  CHECK( flip_bit( bit_vector::from_string( "1111" ), 1u ).to_string() == "0111" );
  CHECK_THROWS_AS( flip_bit( bit_vector( 4u ), 5u ), argument_error );
  CHECK_THROWS_AS( flip_bit( bit_vector( 4u ), 0u ), argument_error );
}

TEST_CASE( "set_bit", "[boolfn]" )
{
  CHECK( set_bit( bit_vector::from_string( "1010" ), 1u, false ).to_string() == "0010" );
  CHECK( set_bit( bit_vector::from_string( "1010" ), 3u, true ).to_string() == "1010" );
  CHECK_THROWS_AS( set_bit( bit_vector( 3u ), 4u, true ), argument_error );
}

TEST_CASE( "hamming_weight", "[boolfn]" )
{
  CHECK( hamming_weight( bit_vector::from_string( "0000" ) ) == 0u );
  CHECK( hamming_weight( bit_vector::from_string( "1011" ) ) == 3u );
}

TEST_CASE( "elementary manipulations on random vectors", "[boolfn][property]" )
{
  std::mt19937_64 rng( 11u );
  for ( auto trial = 0; trial < 2000; ++trial )
  {
    auto const n = std::uniform_int_distribution<unsigned>( 1u, 24u )( rng );
    auto const x = bit_vector( n, static_cast<std::uint32_t>( rng() ) & ( ( 1u << n ) - 1u ) );
    auto const i = std::uniform_int_distribution<unsigned>( 1u, n )( rng );
    auto const b = ( rng() & 1u ) != 0u;

    CHECK( flip_bit( flip_bit( x, i ), i ) == x );
    CHECK( set_bit( x, i, b )[i] == b );
    CHECK( set_bit( x, i, x[i] ) == x );
    auto const w = hamming_weight( x );
    auto const wf = hamming_weight( flip_bit( x, i ) );
    CHECK( ( wf == w + 1u || wf + 1u == w ) );
    CHECK( hamming_weight( x ) + hamming_weight( complement( x ) ) == n );
    for ( auto j = 1u; j <= n; ++j )
    {
      if ( j != i )
        CHECK( flip_bit( x, i )[j] == x[j] );
    }
  }
}

TEST_CASE( "named functions", "[boolfn]" )
{
  CHECK( named_function( named_family::maj, 2u )( bit_vector::from_string( "10" ) ) == 1u );
  CHECK( named_function( named_family::hw, 3u )( bit_vector::from_string( "110" ) ) == 2u );
  CHECK( named_function( named_family::parity, 4u )( bit_vector::from_string( "1110" ) ) == 1u );
  CHECK( named_function( named_family::hw, 5u ).codomain_size() == 6u );
  CHECK( named_function( named_family::maj, 5u ).codomain_size() == 2u );
  CHECK_THROWS_AS( named_function( named_family::hw, 25u ), sizing_error );
  CHECK_THROWS_AS( named_function( named_family::hw, 0u ), sizing_error );
  CHECK( parse_family( "maj" ) == named_family::maj );
  CHECK_THROWS_AS( parse_family( "and" ), argument_error );

  for ( auto n = 1u; n <= 10u; ++n )
  {
    auto const maj = named_function( named_family::maj, n );
    auto const hw = named_function( named_family::hw, n );
    auto const par = named_function( named_family::parity, n );
    for ( std::uint32_t x = 0u; x < ( 1u << n ); ++x )
    {
      auto const w = testing::weight_of( x, n );
      CHECK( hw( x ) == w );
      CHECK( par( x ) == w % 2u );
      CHECK( maj( x ) == ( 2u * w >= n ? 1u : 0u ) );
    }
  }
}

namespace
{

/* value-wise equality; a restriction keeps the codomain of its source */
bool same_values( truth_table const& a, truth_table const& b )
{
  if ( a.num_vars() != b.num_vars() )
    return false;
  for ( std::uint32_t x = 0u; x < ( 1u << a.num_vars() ); ++x )
    if ( a( x ) != b( x ) )
      return false;
  return true;
}

} // namespace

TEST_CASE( "restrict", "[boolfn]" )
{
  std::vector<unsigned> const first_two{ 1u, 2u };
  CHECK( same_values( restrict( named_function( named_family::hw, 4u ), first_two, { { 3u, false }, { 4u, false } } ),
                     named_function( named_family::hw, 2u ) ) );
  CHECK( same_values( restrict( named_function( named_family::maj, 4u ), first_two, { { 3u, true }, { 4u, false } } ),
                     named_function( named_family::maj, 2u ) ) );

  std::vector<unsigned> const second{ 2u };
  auto const not_fn = truth_table( 1u, 2u, []( std::uint32_t x ) { return 1u - x; } );
  CHECK( restrict( named_function( named_family::parity, 3u ), second, { { 1u, true }, { 3u, false } } ) == not_fn );

  /* coordinates keep their relative order */
  auto const f = truth_table( 3u, 8u, []( std::uint32_t x ) { return x; } );
  std::vector<unsigned> const odd{ 1u, 3u };
  auto const r = restrict( f, odd, { { 2u, false } } );
  CHECK( r( 0b01u ) == 0b001u );
  CHECK( r( 0b10u ) == 0b100u );

  CHECK_THROWS_AS( restrict( f, odd, {} ), argument_error );
  CHECK_THROWS_AS( restrict( f, odd, { { 2u, false }, { 3u, true } } ), argument_error );
  CHECK_THROWS_AS( restrict( f, std::vector<unsigned>{}, { { 1u, false }, { 2u, false }, { 3u, false } } ), argument_error );
}

TEST_CASE( "HW restricted to any half with zeros is HW of half the size", "[boolfn][property]" )
{
  for ( auto m = 1u; m <= 5u; ++m )
  {
    auto const big = named_function( named_family::hw, 2u * m );
    for ( std::uint32_t mask = 0u; mask < ( 1u << ( 2u * m ) ); ++mask )
    {
      if ( testing::weight_of( mask, 2u * m ) != m )
        continue;
      std::vector<unsigned> keep;
      std::map<unsigned, bool> fixing;
      for ( auto i = 1u; i <= 2u * m; ++i )
      {
        if ( testing::bit_of( mask, i ) )
          keep.push_back( i );
        else
          fixing[i] = false;
      }
      CHECK( same_values( restrict( big, keep, fixing ), named_function( named_family::hw, m ) ) );
    }
  }
}

TEST_CASE( "depends_on", "[boolfn]" )
{
  auto const f = truth_table( 3u, 2u, []( std::uint32_t x ) { return x & 1u; } );
  CHECK( depends_on( f, 1u ) );
  CHECK_FALSE( depends_on( f, 2u ) );
  CHECK_FALSE( depends_on( f, 3u ) );
}

TEST_CASE( "domains", "[boolfn]" )
{
  auto const band = domain::weight_band( 4u, 1u, 2u );
  CHECK( band.size() == 4u + 6u );
  CHECK( band.contains( 0b0011u ) );
  CHECK_FALSE( band.contains( 0u ) );
  CHECK( domain::full( 3u ).is_full() );
  CHECK_THROWS_AS( domain::weight_band( 3u, 2u, 1u ), argument_error );
  CHECK_THROWS_AS( domain::from_mask( 2u, std::vector<bool>( 4u, false ) ), argument_error );

  /* lexicographic order of the printed strings */
  auto const members = domain::full( 3u ).lex_members();
  std::vector<std::string> printed;
  for ( auto x : members )
    printed.push_back( bit_vector( 3u, x ).to_string() );
  CHECK( std::is_sorted( printed.begin(), printed.end() ) );
  CHECK( printed.size() == 8u );
}
