#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <comploc/constructions.hpp>
#include <comploc/infoflow.hpp>

#include "support.hpp"

using namespace comploc;
using Catch::Matchers::WithinAbs;

namespace
{

composition hw2_identity()
{
  return testing::assemble( 2u, 1u, { local_function::variable( 1u ), local_function::variable( 2u ) }, 3u,
                            []( std::uint32_t x ) { return testing::weight_of( x, 2u ); } );
}

/* H[X_i | g(X)] from the joint over (X_i, g(X)) */
double brute_conditional( composition const& c, std::vector<std::uint32_t> const& points, unsigned i )
{
  std::map<std::string, std::array<double, 2>> cells;
  for ( auto x : points )
    cells[testing::inner_string( c, x )][testing::bit_of( x, i )] += 1.0;
  double h = 0.0;
  auto const total = static_cast<double>( points.size() );
  for ( auto const& [key, cell] : cells )
  {
    auto const row = cell[0] + cell[1];
    for ( auto v : cell )
      h -= ( v / total ) * ( v > 0.0 ? std::log2( v / row ) : 0.0 );
  }
  return h;
}

double brute_joint_entropy( composition const& c, std::vector<std::uint32_t> const& points )
{
  std::map<std::string, double> counts;
  for ( auto x : points )
    counts[testing::inner_string( c, x )] += 1.0;
  double h = 0.0;
  for ( auto const& [key, v] : counts )
    h -= testing::plogp( v / static_cast<double>( points.size() ) );
  return h;
}

} // namespace

TEST_CASE( "entropy closed forms", "[infoflow]" )
{
  CHECK_THAT( entropy( discrete_distribution( { 0.5, 0.5 } ) ), WithinAbs( 1.0, 1e-12 ) );
  CHECK_THAT( entropy( discrete_distribution::uniform( 4u ) ), WithinAbs( 2.0, 1e-12 ) );
  CHECK_THAT( entropy( discrete_distribution( { 1.0, 0.0, 0.0 } ) ), WithinAbs( 0.0, 1e-12 ) );
  CHECK_THAT( binary_entropy( 0.5 ), WithinAbs( 1.0, 1e-12 ) );
  CHECK_THAT( binary_entropy( 0.0 ), WithinAbs( 0.0, 1e-12 ) );
  CHECK_THAT( binary_entropy( 0.25 ), WithinAbs( 0.8112781244591328, 1e-12 ) );

  joint_distribution const same( 2u, 2u, { 0.5, 0.0, 0.0, 0.5 } );
  CHECK_THAT( conditional_entropy( same ), WithinAbs( 0.0, 1e-12 ) );
  CHECK_THAT( mutual_information( same ), WithinAbs( 1.0, 1e-12 ) );
  joint_distribution const indep( 2u, 2u, { 0.25, 0.25, 0.25, 0.25 } );
  CHECK_THAT( mutual_information( indep ), WithinAbs( 0.0, 1e-12 ) );

  std::vector<std::uint64_t> const counts{ 1u, 1u, 2u, 0u };
  CHECK_THAT( entropy_from_counts( counts ), WithinAbs( 1.5, 1e-12 ) );

  CHECK_THROWS_AS( discrete_distribution( { 0.5, 0.6 } ), argument_error );
  CHECK_THROWS_AS( discrete_distribution( { 1.5, -0.5 } ), argument_error );
  CHECK_THROWS_AS( joint_distribution( 2u, 2u, { 1.0 } ), argument_error );
}

TEST_CASE( "identity wrapper determines each bit", "[infoflow]" )
{
  auto const r = compute_info_report( hw2_identity(), domain::full( 2u ) );
  REQUIRE( r.vars.size() == 2u );
  for ( auto const& v : r.vars )
  {
    CHECK( v.q == 1u );
    CHECK_THAT( v.information, WithinAbs( 1.0, 1e-12 ) );
    CHECK_THAT( v.conditional_entropy, WithinAbs( 0.0, 1e-12 ) );
    CHECK( v.escape_count == 0u );
  }
  CHECK_THAT( r.total_information, WithinAbs( 2.0, 1e-12 ) );
  CHECK( r.fibers == 4u );
}

TEST_CASE( "block sum bits reveal half a bit", "[infoflow]" )
{
  auto const c = build_hw( 4u, 2u );
  auto const r = compute_info_report( c, domain::full( 4u ) );
  auto const pts = testing::all_points( 4u );
  for ( auto i = 1u; i <= 4u; ++i )
  {
    CHECK_THAT( r.vars[i - 1u].information, WithinAbs( 0.5, 1e-12 ) );
    CHECK_THAT( r.vars[i - 1u].information, WithinAbs( testing::brute_information( c, pts, i ), 1e-12 ) );
  }
  CHECK( r.total_information <= 4.0 + 1e-12 );
  CHECK( r.total_information >= r.information_sum() - 1e-12 );
}

TEST_CASE( "report matches a brute-force oracle", "[infoflow][property]" )
{
  std::mt19937_64 rng( 21u );
  for ( auto trial = 0; trial < 40; ++trial )
  {
    auto const n = std::uniform_int_distribution<unsigned>( 2u, 9u )( rng );
    auto const k = std::uniform_int_distribution<unsigned>( 1u, std::min( 3u, n ) )( rng );
    auto const c = testing::random_hw_composition( rng, n, k );
    auto const lo = std::uniform_int_distribution<unsigned>( 0u, n )( rng );
    auto const hi = std::uniform_int_distribution<unsigned>( lo, n )( rng );
    auto const full = trial % 2 == 0;
    auto const d = full ? domain::full( n ) : domain::weight_band( n, lo, hi );

    std::vector<std::uint32_t> pts;
    for ( std::uint32_t x = 0u; x < ( 1u << n ); ++x )
      if ( full || ( testing::weight_of( x, n ) >= lo && testing::weight_of( x, n ) <= hi ) )
        pts.push_back( x );

    auto const r = compute_info_report( c, d );
    REQUIRE( r.domain_size == pts.size() );
    CHECK_THAT( r.input_entropy, WithinAbs( std::log2( double( pts.size() ) ), 1e-12 ) );
    CHECK_THAT( r.total_information, WithinAbs( brute_joint_entropy( c, pts ), 1e-9 ) );
    CHECK( r.total_information <= double( c.num_inners() ) + 1e-9 );
    if ( full )
      CHECK( r.total_information >= r.information_sum() - 1e-9 );
    for ( auto i = 1u; i <= n; ++i )
    {
      auto const& v = r.vars[i - 1u];
      CHECK_THAT( v.information, WithinAbs( testing::brute_information( c, pts, i ), 1e-9 ) );
      CHECK_THAT( v.conditional_entropy, WithinAbs( brute_conditional( c, pts, i ), 1e-9 ) );
      CHECK( v.conditional_entropy >= -1e-12 );
      CHECK( v.conditional_entropy <= v.marginal_entropy + 1e-12 );
      std::uint64_t escapes = 0u;
      for ( auto x : pts )
      {
        auto const y = x ^ ( 1u << ( i - 1u ) );
        if ( !full && ( testing::weight_of( y, n ) < lo || testing::weight_of( y, n ) > hi ) )
          ++escapes;
      }
      CHECK( v.escape_count == escapes );
      if ( full )
        CHECK( v.information > 1e-9 );
    }
  }
}

TEST_CASE( "key lemma on constructions", "[infoflow]" )
{
  for ( auto n = 1u; n <= 12u; ++n )
  {
    for ( auto k : { 1u, 2u, 3u, 4u } )
    {
      if ( k > n )
        continue;
      auto const c = build_hw( n, k );
      auto const rep = check_key_lemma( c, named_function( named_family::hw, n ), domain::full( n ) );
      CHECK( rep.pass );
      CHECK( rep.every_variable_queried );
      for ( auto const& e : rep.entries )
      {
        CHECK( e.gap > 1e-9 );
        if ( e.q == 1u )
          CHECK_THAT( e.gap, WithinAbs( 1.0, 1e-12 ) );
      }
    }
  }
  auto const base = build_hw( 4u, 2u );
  CHECK_THROWS_AS( check_key_lemma( base, named_function( named_family::parity, 4u ), domain::full( 4u ) ), precondition_error );
  CHECK_THROWS_AS( check_key_lemma( build_parity( 4u, 2u ), named_function( named_family::parity, 4u ), domain::full( 4u ) ),
                   precondition_error );
}

TEST_CASE( "key lemma on random Hamming-weight compositions and bands", "[infoflow][property]" )
{
  std::mt19937_64 rng( 5u );
  for ( auto trial = 0; trial < 60; ++trial )
  {
    auto const n = std::uniform_int_distribution<unsigned>( 2u, 10u )( rng );
    auto const k = std::uniform_int_distribution<unsigned>( 1u, std::min( 4u, n ) )( rng );
    auto const c = testing::random_hw_composition( rng, n, k );
    auto const lo = std::uniform_int_distribution<unsigned>( 0u, n )( rng );
    auto const hi = std::uniform_int_distribution<unsigned>( lo, n )( rng );
    auto const rep = check_key_lemma( c, named_function( named_family::hw, n ), domain::weight_band( n, lo, hi ) );
    CHECK( rep.pass );
    for ( auto const& e : rep.entries )
      CHECK( e.gap >= -1e-9 );
  }
}

TEST_CASE( "counting bound", "[infoflow]" )
{
  auto const c = build_hw( 8u, 4u );
  auto const first = check_counting_bound( c, { { 1u, 2u, 3u, 4u } } );
  CHECK( first.pass );

  std::mt19937_64 rng( 9u );
  for ( auto trial = 0; trial < 10; ++trial )
  {
    auto const hw6 = testing::random_hw_composition( rng, 6u, 3u );
    auto const singles = check_counting_bound( hw6, subsets_up_to( 6u, 1u ) );
    CHECK( singles.pass );
    CHECK( singles.checked == 6u );
    auto pairs = subsets_up_to( 6u, 2u );
    std::erase_if( pairs, []( auto const& s ) { return s.size() != 2u; } );
    REQUIRE( pairs.size() == 15u );
    auto const r = check_counting_bound( hw6, pairs );
    CHECK( r.pass );
  }
  CHECK( subsets_up_to( 4u, 4u ).size() == 15u );
  CHECK_THROWS_AS( check_counting_bound( build_parity( 4u, 2u ), { { 1u } } ), precondition_error );
}

TEST_CASE( "bias witness on the identity wrapper", "[infoflow]" )
{
  auto const c = hw2_identity();
  auto const cands = enumerate_bias_candidates( c, domain::full( 2u ), 1u );
  REQUIRE( cands.size() == 2u );
  CHECK( cands[0].v.to_string() == "0" );
  CHECK( cands[1].v.to_string() == "1" );
  CHECK( cands[0].weight_count == 2u );

  auto const w = extract_bias_witness( c, domain::full( 2u ), 1u );
  CHECK( w.var == 1u );
  CHECK( w.q == 1u );
  CHECK( w.v.to_string() == "0" );
  CHECK( w.w_star == 0u );
  CHECK( w.p_cond == 0.0 );
  CHECK( w.mass == 0.5 );
  CHECK( w.weight_count == 2u );
}

TEST_CASE( "bias witness on constructions and bands", "[infoflow][property]" )
{
  auto const c = build_hw( 4u, 2u );
  auto const w = extract_bias_witness( c, domain::full( 4u ), 1u );
  CHECK( w.weight_count <= 4u );
  CHECK( ( w.p_cond == 0.0 || w.p_cond == 1.0 ) );

  std::mt19937_64 rng( 77u );
  for ( auto trial = 0; trial < 40; ++trial )
  {
    auto const n = std::uniform_int_distribution<unsigned>( 2u, 9u )( rng );
    auto const k = std::uniform_int_distribution<unsigned>( 1u, std::min( 3u, n ) )( rng );
    auto const hw = testing::random_hw_composition( rng, n, k );
    auto const full = trial % 2 == 0;
    auto const lo = std::uniform_int_distribution<unsigned>( 0u, n )( rng );
    auto const hi = std::uniform_int_distribution<unsigned>( lo, n )( rng );
    auto const d = full ? domain::full( n ) : domain::weight_band( n, lo, hi );
    auto const prof = profile_queries( hw );
    for ( auto i = 1u; i <= n; ++i )
    {
      for ( auto const& cand : enumerate_bias_candidates( hw, d, i ) )
      {
        CHECK( cand.weight_count <= ( 1u << prof.q[i - 1u] ) );
        CHECK( cand.class_size > 0u );
      }
      auto const wit = extract_bias_witness( hw, d, i );
      CHECK( wit.p_cond >= 0.0 );
      CHECK( wit.p_cond <= 1.0 );
      CHECK( wit.mass > 0.0 );
      CHECK( wit.weight_count <= ( 1u << wit.q ) );
      if ( full )
        CHECK( wit.p_cond != 0.5 );
    }
  }
}

TEST_CASE( "bias witness preconditions", "[infoflow]" )
{
  auto const g = local_function::variable( 1u );
  auto const c = testing::assemble( 2u, 1u, { g }, 2u, []( std::uint32_t x ) { return x & 1u; } );
  CHECK_THROWS_AS( extract_bias_witness( c, domain::full( 2u ), 1u ), precondition_error );
  CHECK_THROWS_AS( extract_bias_witness( hw2_identity(), domain::full( 2u ), 3u ), argument_error );
}

TEST_CASE( "information facts", "[infoflow]" )
{
  auto const r = validate_information_facts( 500u, 7u );
  CHECK( r.pass() );
  CHECK( r.trials == 500u );
  CHECK( r.checks >= 500u * 10u );
}
