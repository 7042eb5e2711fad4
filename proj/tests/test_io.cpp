#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <comploc/constructions.hpp>
#include <comploc/io.hpp>

#include "support.hpp"

using namespace comploc;

TEST_CASE( "composition round trip", "[io][property]" )
{
  std::mt19937_64 rng( 12u );
  for ( auto trial = 0; trial < 50; ++trial )
  {
    auto const n = std::uniform_int_distribution<unsigned>( 1u, 9u )( rng );
    auto const k = std::uniform_int_distribution<unsigned>( 1u, std::min( 4u, n ) )( rng );
    auto const c = trial % 2 == 0 ? testing::random_hw_composition( rng, n, k )
                                  : testing::random_binary_composition( rng, n, k, std::uniform_int_distribution<unsigned>( 1u, 8u )( rng ) );
    auto const text = serialize_composition( c );
    auto const back = parse_composition( text );
    CHECK( back == c );
    CHECK( serialize_composition( back ) == text );
  }
  auto const hw = build_hw( 8u, 4u );
  CHECK( parse_composition( serialize_composition( hw ) ) == hw );
}

TEST_CASE( "branching program round trip", "[io][property]" )
{
  std::mt19937_64 rng( 4u );
  for ( auto trial = 0; trial < 10; ++trial )
  {
    auto const n = std::uniform_int_distribution<unsigned>( 1u, 8u )( rng );
    auto const w = std::uniform_int_distribution<unsigned>( 2u, 5u )( rng );
    std::uniform_int_distribution<unsigned> state( 0u, w - 1u ), var( 1u, n );
    std::vector<bp_layer> layers;
    for ( auto t = 0u; t < 6u; ++t )
    {
      bp_layer layer{ var( rng ), {}, {} };
      for ( auto s = 0u; s < w; ++s )
      {
        layer.delta0.push_back( state( rng ) );
        layer.delta1.push_back( state( rng ) );
      }
      layers.push_back( layer );
    }
    std::set<unsigned> accept{ state( rng ) };
    if ( trial % 3 == 0 )
      accept.clear();
    branching_program const bp( n, w, layers, state( rng ), accept );
    auto const back = parse_bp( serialize_bp( bp ) );
    CHECK( back == bp );
  }
  CHECK( parse_bp( serialize_bp( mod_counter_bp( 6u, 3u ) ) ) == mod_counter_bp( 6u, 3u ) );
}

TEST_CASE( "depth-3 round trip", "[io]" )
{
  for ( auto p : { polarity::sigma3, polarity::pi3 } )
  {
    auto const d = composition_to_depth3( build_maj( 6u, 3u ), p );
    CHECK( parse_depth3( serialize_depth3( d ) ) == d );
  }
  std::mt19937_64 rng( 30u );
  auto const d = composition_to_depth3( testing::random_binary_composition( rng, 5u, 2u, 4u ), polarity::sigma3 );
  CHECK( parse_depth3( serialize_depth3( d ) ) == d );
}

TEST_CASE( "unsorted support lines are canonicalized", "[io]" )
{
  /* inner is 1 only at x1 = 1, x2 = 0 */
  auto const g = local_function::from_callable( { 1u, 2u }, []( std::uint32_t a ) { return a == 1u; } );
  auto const c = testing::assemble( 2u, 2u, { g }, 2u, []( std::uint32_t x ) { return x == 1u ? 1u : 0u; } );
  auto text = serialize_composition( c );
  auto const pos = text.find( "VARS 1,2" );
  REQUIRE( pos != std::string::npos );
  text.replace( pos, 8u, "VARS 2,1" );
  auto const back = parse_composition( text );
  /* the same table read with x2 listed first */
  CHECK( std::ranges::equal( back.inners()[0].support(), std::vector<unsigned>{ 1u, 2u } ) );
  CHECK( back.inners()[0]( 0b10u ) );
  CHECK_FALSE( back.inners()[0]( 0b01u ) );
  CHECK( serialize_composition( back ).find( "VARS 1,2" ) != std::string::npos );
}

TEST_CASE( "parse errors", "[io]" )
{
  CHECK_THROWS_AS( parse_composition( "" ), parse_error );
  CHECK_THROWS_AS( parse_composition( "COMPOSITION n=3\n" ), parse_error );
  auto text = serialize_composition( build_parity( 4u, 2u ) );
  auto broken = text;
  broken.replace( broken.find( "VARS" ), 4u, "VRAS" );
  CHECK_THROWS_AS( parse_composition( broken ), parse_error );
  try
  {
    parse_composition( broken );
  }
  catch ( parse_error const& e )
  {
    CHECK( std::string( e.what() ).find( "line" ) != std::string::npos );
  }
  CHECK_THROWS_AS( parse_bp( "BP n=2 w=2\n" ), parse_error );
  CHECK_THROWS_AS( parse_depth3( "DEPTH3 n=2\n" ), parse_error );
  CHECK_THROWS_AS( parse_band( "3" ), parse_error );
  CHECK_THROWS_AS( parse_band( "a:2" ), parse_error );
  CHECK( parse_band( "2:5" ) == std::pair{ 2u, 5u } );

  /* comments and blank lines are ignored */
  auto const commented = "# header comment\n\n" + text;
  CHECK( parse_composition( commented ) == build_parity( 4u, 2u ) );
}

TEST_CASE( "information CSV", "[io]" )
{
  auto const c = build_hw( 4u, 2u );
  auto const csv = info_csv( compute_info_report( c, domain::full( 4u ) ) );
  std::vector<std::string> lines;
  std::size_t start = 0u;
  while ( start < csv.size() )
  {
    auto const end = csv.find( '\n', start );
    lines.push_back( csv.substr( start, end - start ) );
    start = end + 1u;
  }
  REQUIRE( lines.size() == 6u );
  CHECK( lines[1].rfind( "1,2,", 0 ) == 0u );
  CHECK( lines[1].find( "0.500000000000" ) != std::string::npos );
  CHECK( lines[5].rfind( "all,", 0 ) == 0u );
}
