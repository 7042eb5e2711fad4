#include "comploc/majreduce.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

namespace comploc
{

namespace
{

std::uint32_t mask_of( std::span<const unsigned> vars ) noexcept
{
  std::uint32_t mask = 0u;
  for ( auto i : vars )
  {
    mask |= 1u << ( i - 1u );
  }
  return mask;
}

std::vector<unsigned> vars_of( std::uint32_t mask )
{
  std::vector<unsigned> out;
  for ( auto i = 1u; mask; ++i, mask >>= 1u )
  {
    if ( mask & 1u )
      out.push_back( i );
  }
  return out;
}

/* variables read by the inners touching `controls`, plus the controls themselves */
std::uint32_t closure_of( std::vector<std::uint32_t> const& supports, std::uint32_t controls ) noexcept
{
  std::uint32_t closure = controls;
  for ( auto s : supports )
  {
    if ( s & controls )
      closure |= s;
  }
  return closure;
}

unsigned ceil_half( unsigned v ) noexcept
{
  return ( v + 1u ) / 2u;
}

} // namespace

variable_split split_variables( composition const& c, unsigned t )
{
  auto const n = c.num_vars();
  if ( t < 1u )
  {
    throw argument_error( "control size t must be at least 1" );
  }
  if ( t > n )
  {
    throw infeasible_error( fmt::format( "control size t = {} exceeds n = {}", t, n ) );
  }
  if ( auto cex = verify_against( c, named_function( named_family::maj, n ), domain::full( n ) ) )
  {
    throw precondition_error( fmt::format( "composition does not compute Maj_{}: counterexample {}", n, cex->input.to_string() ) );
  }

  std::vector<std::uint32_t> supports;
  for ( auto const& g : c.inners() )
  {
    supports.push_back( mask_of( g.support() ) );
  }

  std::uint32_t controls = 0u;
  for ( auto step = 0u; step < t; ++step )
  {
    unsigned best_var = 0u;
    int best_size = 0;
    for ( auto i = 1u; i <= n; ++i )
    {
      auto const bit = 1u << ( i - 1u );
      if ( controls & bit )
        continue;
      auto const size = std::popcount( closure_of( supports, controls | bit ) );
      if ( best_var == 0u || size < best_size )
      {
        best_var = i;
        best_size = size;
      }
    }
    controls |= 1u << ( best_var - 1u );
  }

  auto closure = closure_of( supports, controls );
  for ( auto i = 1u; i <= n && static_cast<unsigned>( std::popcount( closure ) ) < 2u * t + 1u; ++i )
  {
    closure |= 1u << ( i - 1u );
  }
  auto const closure_size = static_cast<unsigned>( std::popcount( closure ) );
  if ( closure_size < 2u * t + 1u || 2u * closure_size > n )
  {
    throw infeasible_error( fmt::format( "closure of {} control variables has {} elements; need 2t+1 = {} <= |I'| <= n/2 = {}", t,
                                         closure_size, 2u * t + 1u, n / 2.0 ) );
  }

  variable_split split;
  split.n = n;
  split.t = t;
  split.control = vars_of( controls );
  split.buffer = vars_of( closure & ~controls );
  split.free = vars_of( ~closure & ( n == 32u ? ~0u : ( ( 1u << n ) - 1u ) ) );
  split.closure = vars_of( closure );
  for ( auto j = 0u; j < supports.size(); ++j )
  {
    if ( supports[j] & controls )
      split.touching.push_back( j );
  }
  return split;
}

bool no_mixing( composition const& c, variable_split const& split )
{
  auto const free = mask_of( split.free );
  auto const control = mask_of( split.control );
  return std::none_of( c.inners().begin(), c.inners().end(), [&]( local_function const& g ) {
    auto const s = mask_of( g.support() );
    return ( s & free ) && ( s & control );
  } );
}

truth_table clamped_weight( unsigned n, unsigned lo, unsigned hi )
{
  if ( lo > hi || hi > n )
  {
    throw argument_error( fmt::format( "clamp interval {}:{} invalid for arity {}", lo, hi, n ) );
  }
  return truth_table( n, n + 1u, [lo, hi]( std::uint32_t x ) { return std::clamp( static_cast<unsigned>( std::popcount( x ) ), lo, hi ); } );
}

partial_hw derive_partial_hw( composition const& c, variable_split const& split, control_fill fill )
{
  auto const n = c.num_vars();
  if ( split.n != n || !no_mixing( c, split ) ||
       split.control.size() + split.buffer.size() + split.free.size() != n || split.control.size() != split.t )
  {
    throw argument_error( "variable split does not belong to this composition" );
  }

  auto const t = split.t;
  auto const nf = static_cast<unsigned>( split.free.size() );
  auto const s = t / 2u;
  auto const centre = static_cast<int>( ceil_half( nf ) );
  auto const b = static_cast<int>( ceil_half( n ) ) - centre - static_cast<int>( s );
  if ( b < 0 || b > static_cast<int>( split.buffer.size() ) )
  {
    throw infeasible_error( fmt::format( "buffer weight b = {} outside 0..{}", b, split.buffer.size() ) );
  }
  auto const lo = centre - static_cast<int>( s ) - 1;
  auto const hi = centre + static_cast<int>( s );
  if ( nf == 0u || lo < 0 || hi > static_cast<int>( nf ) )
  {
    throw infeasible_error( fmt::format( "weight band {}:{} does not fit {} free variables", lo, hi, nf ) );
  }

  partial_hw r;
  r.split = split;
  r.s = s;
  r.lo = static_cast<unsigned>( lo );
  r.hi = static_cast<unsigned>( hi );
  r.b = static_cast<unsigned>( b );
  r.buffer_assignment.assign( split.buffer.size(), false );
  std::uint32_t fixed = 0u;
  for ( auto t2 = 0u; t2 < r.b; ++t2 )
  {
    r.buffer_assignment[t2] = true;
    fixed |= 1u << ( split.buffer[t2] - 1u );
  }

  /* control assignment of each weight */
  std::vector<std::uint32_t> control_inputs;
  for ( auto w = 0u; w <= t; ++w )
  {
    std::uint32_t x = 0u;
    for ( auto u = 0u; u < w; ++u )
    {
      auto const var = fill == control_fill::lowest ? split.control[u] : split.control[t - 1u - u];
      x |= 1u << ( var - 1u );
    }
    control_inputs.push_back( x );
  }

  /* free coordinate i of the source becomes coordinate position+1 */
  std::vector<unsigned> renumber( n + 1u, 0u );
  for ( auto p = 0u; p < nf; ++p )
  {
    renumber[split.free[p]] = p + 1u;
  }
  auto lift = [&]( std::uint32_t y ) {
    std::uint32_t x = fixed;
    for ( auto p = 0u; p < nf; ++p )
    {
      x |= ( ( y >> p ) & 1u ) << ( split.free[p] - 1u );
    }
    return x;
  };

  std::vector<unsigned> free_dependent;
  std::vector<local_function> inners;
  for ( auto j = 0u; j < c.num_inners(); ++j )
  {
    auto const& g = c.inners()[j];
    std::vector<unsigned> support;
    for ( auto i : g.support() )
    {
      if ( renumber[i] != 0u )
        support.push_back( renumber[i] );
    }
    if ( support.empty() )
      continue;
    free_dependent.push_back( j );
    inners.push_back( local_function::from_callable( support, [&]( std::uint32_t a ) {
      std::uint32_t y = 0u;
      for ( auto u = 0u; u < support.size(); ++u )
      {
        y |= ( ( a >> u ) & 1u ) << ( support[u] - 1u );
      }
      return g( lift( y ) );
    } ) );
  }
  if ( inners.empty() )
  {
    throw infeasible_error( "no inner function reads a free variable" );
  }

  auto const m = static_cast<unsigned>( inners.size() );
  auto const c0 = centre + static_cast<int>( s );
  std::map<output_key, unsigned> entries;
  for ( std::uint64_t y = 0u; y < ( std::uint64_t( 1 ) << nf ); ++y )
  {
    auto const x_free = lift( static_cast<std::uint32_t>( y ) );
    output_key key( m );
    for ( auto u = 0u; u < m; ++u )
    {
      key.set( u, c.inners()[free_dependent[u]]( x_free ) );
    }
    if ( entries.count( key ) )
      continue;
    /* replay the source outer over every control weight; inners reading only
       buffer and control coordinates are recomputed, the others come from key */
    int ones = 0;
    for ( auto const ctrl : control_inputs )
    {
      auto const x = x_free | ctrl;
      output_key full( c.num_inners() );
      for ( auto j = 0u, u = 0u; j < c.num_inners(); ++j )
      {
        if ( u < m && free_dependent[u] == j )
          full.set( j, key[u++] );
        else
          full.set( j, c.inners()[j]( x ) );
      }
      ones += static_cast<int>( c.outer().at( full ) );
    }
    entries.emplace( std::move( key ), static_cast<unsigned>( std::clamp( c0 - static_cast<int>( t ) - 1 + ones, lo, hi ) ) );
  }

  r.derived = composition( nf, c.locality(), std::move( inners ), outer_function( m, nf + 1u, std::move( entries ) ) );
  if ( auto cex = verify_against( r.derived, named_function( named_family::hw, nf ), r.band() ) )
  {
    throw precondition_error( fmt::format( "derived composition fails on the band at {}", cex->input.to_string() ) );
  }
  return r;
}

pipeline_report end_to_end_pipeline( composition const& c, unsigned t )
{
  pipeline_report p;
  p.reduction = derive_partial_hw( c, split_variables( c, t ) );
  auto const band = p.reduction.band();
  auto const nf = p.reduction.num_free();
  p.info = compute_info_report( p.reduction.derived, band );
  p.lemma = check_key_lemma( p.reduction.derived, named_function( named_family::hw, nf ), band );
  p.m = p.reduction.derived.num_inners();
  p.free_deficit = static_cast<double>( nf ) - std::log2( static_cast<double>( band.size() ) );
  for ( auto const& e : p.lemma.entries )
  {
    p.gap_sum += e.gap;
  }
  return p;
}

} // namespace comploc
