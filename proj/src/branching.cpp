#include "comploc/branching.hpp"

#include <algorithm>
#include <bit>

#include <fmt/format.h>

namespace comploc
{

branching_program::branching_program( unsigned n, unsigned width, std::vector<bp_layer> layers, unsigned start, std::set<unsigned> accept )
    : n_( n ), w_( width ), layers_( std::move( layers ) ), start_( start ), accept_( std::move( accept ) )
{
  detail::check_arity( n );
  if ( width < 2u )
  {
    throw argument_error( fmt::format( "branching program width {} must be at least 2", width ) );
  }
  if ( start >= width )
  {
    throw argument_error( fmt::format( "start state {} outside 0..{}", start, width - 1u ) );
  }
  for ( auto s : accept_ )
  {
    if ( s >= width )
    {
      throw argument_error( fmt::format( "accepting state {} outside 0..{}", s, width - 1u ) );
    }
  }
  for ( auto t = 0u; t < layers_.size(); ++t )
  {
    auto const& layer = layers_[t];
    if ( layer.var < 1u || layer.var > n )
    {
      throw argument_error( fmt::format( "layer {} reads coordinate {} outside 1..{}", t + 1u, layer.var, n ) );
    }
    if ( layer.delta0.size() != width || layer.delta1.size() != width )
    {
      throw argument_error( fmt::format( "layer {} transition maps must have {} entries", t + 1u, width ) );
    }
    auto const in_range = [width]( unsigned s ) { return s < width; };
    if ( !std::all_of( layer.delta0.begin(), layer.delta0.end(), in_range ) ||
         !std::all_of( layer.delta1.begin(), layer.delta1.end(), in_range ) )
    {
      throw argument_error( fmt::format( "layer {} maps a state outside 0..{}", t + 1u, width - 1u ) );
    }
  }
}

bool bp_evaluate( branching_program const& bp, bit_vector const& x )
{
  if ( x.size() != bp.num_vars() )
  {
    throw argument_error( fmt::format( "input of arity {} given to a program on {} variables", x.size(), bp.num_vars() ) );
  }
  return bp.accept().count( bp.run( x.bits(), bp.start(), 0u, bp.length() ) ) != 0u;
}

truth_table bp_truth_table( branching_program const& bp )
{
  return truth_table( bp.num_vars(), 2u, [&]( std::uint32_t x ) {
    return bp.accept().count( bp.run( x, bp.start(), 0u, bp.length() ) ) != 0u ? 1u : 0u;
  } );
}

branching_program parity_bp( unsigned n )
{
  std::vector<bp_layer> layers;
  for ( auto i = 1u; i <= n; ++i )
  {
    layers.push_back( { i, { 0u, 1u }, { 1u, 0u } } );
  }
  return branching_program( n, 2u, std::move( layers ), 0u, { 1u } );
}

branching_program mod_counter_bp( unsigned n, unsigned width )
{
  std::vector<bp_layer> layers;
  for ( auto i = 1u; i <= n; ++i )
  {
    bp_layer layer{ i, {}, {} };
    for ( auto s = 0u; s < width; ++s )
    {
      layer.delta0.push_back( s );
      layer.delta1.push_back( ( s + 1u ) % width );
    }
    layers.push_back( std::move( layer ) );
  }
  return branching_program( n, width, std::move( layers ), 0u, { 0u } );
}

unsigned state_bits( unsigned width ) noexcept
{
  return static_cast<unsigned>( std::bit_width( width - 1u ) );
}

composition bp_to_composition( branching_program const& bp, unsigned k )
{
  if ( k < 1u )
  {
    throw argument_error( "locality k must be at least 1" );
  }
  if ( bp.length() == 0u )
  {
    throw argument_error( "cannot reduce a program without layers" );
  }
  auto const w = bp.width();
  auto const bits = state_bits( w );
  auto const segments = ( bp.length() + k - 1u ) / k;

  std::vector<local_function> inners;
  for ( auto seg = 0u; seg < segments; ++seg )
  {
    auto const first = seg * k;
    auto const last = std::min( bp.length(), first + k );
    std::vector<unsigned> support;
    for ( auto t = first; t < last; ++t )
    {
      support.push_back( bp.layers()[t].var );
    }
    std::sort( support.begin(), support.end() );
    support.erase( std::unique( support.begin(), support.end() ), support.end() );

    for ( auto sigma = 0u; sigma < w; ++sigma )
    {
      for ( auto b = 0u; b < bits; ++b )
      {
        inners.push_back( local_function::from_callable( support, [&]( std::uint32_t a ) {
          std::uint32_t x = 0u;
          for ( auto t = 0u; t < support.size(); ++t )
          {
            x |= ( ( a >> t ) & 1u ) << ( support[t] - 1u );
          }
          return ( ( bp.run( x, sigma, first, last ) >> b ) & 1u ) != 0u;
        } ) );
      }
    }
  }

  auto const m = static_cast<unsigned>( inners.size() );
  auto chain = [&]( output_key const& key ) {
    auto state = bp.start();
    for ( auto seg = 0u; seg < segments; ++seg )
    {
      auto const base = ( seg * w + state ) * bits;
      unsigned next = 0u;
      for ( auto b = 0u; b < bits; ++b )
      {
        next |= static_cast<unsigned>( key[base + b] ) << b;
      }
      state = next;
    }
    return bp.accept().count( state ) != 0u ? 1u : 0u;
  };

  /* the outer is defined on reachable inner-output vectors only; its value
     comes from decoding the vector, never from running the program on x */
  std::map<output_key, unsigned> entries;
  for ( std::uint64_t x = 0u; x < ( std::uint64_t( 1 ) << bp.num_vars() ); ++x )
  {
    output_key key( m );
    for ( auto j = 0u; j < m; ++j )
    {
      key.set( j, inners[j]( static_cast<std::uint32_t>( x ) ) );
    }
    if ( entries.find( key ) == entries.end() )
    {
      auto const v = chain( key );
      entries.emplace( std::move( key ), v );
    }
  }

  return composition( bp.num_vars(), std::min( k, bp.num_vars() ), std::move( inners ), outer_function( m, 2u, std::move( entries ) ) );
}

} // namespace comploc
