#include "comploc/depth3.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <cstdlib>

#include <fmt/format.h>

namespace comploc
{

namespace
{

bool literal_value( literal l, std::uint32_t x ) noexcept
{
  auto const bit = ( ( x >> ( std::abs( l ) - 1 ) ) & 1u ) != 0u;
  return l > 0 ? bit : !bit;
}

/* Canonical two-level form of the predicate (g == want_value) over g's
   support: with `clause` set, the maxterm CNF (one clause per assignment where
   the predicate fails); otherwise the minterm DNF (one term per assignment
   where it holds). */
std::vector<std::vector<literal>> canonical_terms( local_function const& g, bool want_value, bool clause )
{
  std::vector<std::vector<literal>> terms;
  auto const support = g.support();
  for ( std::uint32_t a = 0u; a < ( 1u << support.size() ); ++a )
  {
    auto const v = g.value_at( a );
    if ( clause ? ( v != want_value ) : ( v == want_value ) )
    {
      std::vector<literal> term;
      for ( auto t = 0u; t < support.size(); ++t )
      {
        auto const bit = ( a >> t ) & 1u;
        auto const i = static_cast<literal>( support[t] );
        /* a maxterm negates the assignment; a minterm copies it */
        term.push_back( ( bit != 0u ) == clause ? -i : i );
      }
      std::sort( term.begin(), term.end() );
      terms.push_back( std::move( term ) );
    }
  }
  return terms;
}

} // namespace

polarity parse_polarity( std::string_view name )
{
  if ( name == "sigma3" )
    return polarity::sigma3;
  if ( name == "pi3" )
    return polarity::pi3;
  throw argument_error( fmt::format( "unknown polarity '{}'", name ) );
}

std::string_view polarity_name( polarity p ) noexcept
{
  return p == polarity::sigma3 ? "sigma3" : "pi3";
}

depth3_circuit composition_to_depth3( composition const& c, polarity p )
{
  if ( c.codomain_size() != 2u )
  {
    throw argument_error( fmt::format( "depth-3 lowering needs a binary codomain, got {}", c.codomain_size() ) );
  }
  if ( c.num_vars() > depth3_max_vars || c.num_inners() > depth3_max_inners )
  {
    throw sizing_error( fmt::format( "depth-3 lowering limited to n <= {} and m <= {} (got n = {}, m = {})", depth3_max_vars,
                                     depth3_max_inners, c.num_vars(), c.num_inners() ) );
  }

  depth3_circuit d;
  d.n = c.num_vars();
  d.bottom_fanin = c.locality();
  d.kind = p;

  auto const clause = p == polarity::sigma3;
  /* sigma3 ORs the accepted vectors, pi3 ANDs the negations of the rejected ones */
  auto const selected_value = clause ? 1u : 0u;

  /* per inner, the terms expressing g_j == 0 and g_j == 1 (sigma3) or
     g_j != 0 and g_j != 1 (pi3) */
  auto const m = c.num_inners();
  std::vector<std::array<std::vector<std::vector<literal>>, 2>> pieces( m );
  for ( auto j = 0u; j < m; ++j )
  {
    for ( auto b = 0u; b < 2u; ++b )
    {
      /* sigma3: CNF of (g_j == b).  pi3: DNF of (g_j == 1 - b), i.e. g_j != b */
      auto const want = clause ? ( b == 1u ) : ( b == 0u );
      pieces[j][b] = canonical_terms( c.inners()[j], want, clause );
    }
  }

  /* bottom gates are created on first use so unused pieces cost nothing */
  std::map<std::vector<literal>, unsigned> bottom_index;
  for ( auto const& [key, value] : c.outer().entries() )
  {
    if ( value != selected_value )
      continue;
    middle_gate gate;
    for ( auto j = 0u; j < m; ++j )
    {
      for ( auto const& term : pieces[j][key[j] ? 1u : 0u] )
      {
        if ( term.size() == 1u )
        {
          gate.literals.push_back( term.front() );
          continue;
        }
        auto [it, inserted] = bottom_index.try_emplace( term, static_cast<unsigned>( d.bottom.size() ) );
        if ( inserted )
        {
          d.bottom.push_back( term );
        }
        gate.bottom.push_back( it->second );
      }
    }
    std::sort( gate.bottom.begin(), gate.bottom.end() );
    gate.bottom.erase( std::unique( gate.bottom.begin(), gate.bottom.end() ), gate.bottom.end() );
    std::sort( gate.literals.begin(), gate.literals.end() );
    gate.literals.erase( std::unique( gate.literals.begin(), gate.literals.end() ), gate.literals.end() );
    d.middle.push_back( std::move( gate ) );
  }
  return d;
}

bool depth3_evaluate( depth3_circuit const& d, std::uint32_t x )
{
  auto const sigma = d.kind == polarity::sigma3;
  std::vector<char> bottom( d.bottom.size() );
  for ( auto b = 0u; b < d.bottom.size(); ++b )
  {
    auto const& lits = d.bottom[b];
    /* sigma3 bottom gates are ORs, pi3 bottom gates are ANDs */
    bottom[b] = sigma ? std::any_of( lits.begin(), lits.end(), [x]( literal l ) { return literal_value( l, x ); } )
                      : std::all_of( lits.begin(), lits.end(), [x]( literal l ) { return literal_value( l, x ); } );
  }
  for ( auto const& gate : d.middle )
  {
    bool value;
    if ( sigma )
    {
      value = std::all_of( gate.bottom.begin(), gate.bottom.end(), [&]( unsigned b ) { return bottom[b] != 0; } ) &&
              std::all_of( gate.literals.begin(), gate.literals.end(), [x]( literal l ) { return literal_value( l, x ); } );
      if ( value )
        return true;
    }
    else
    {
      value = std::any_of( gate.bottom.begin(), gate.bottom.end(), [&]( unsigned b ) { return bottom[b] != 0; } ) ||
              std::any_of( gate.literals.begin(), gate.literals.end(), [x]( literal l ) { return literal_value( l, x ); } );
      if ( !value )
        return false;
    }
  }
  return !sigma;
}

bool depth3_evaluate( depth3_circuit const& d, bit_vector const& x )
{
  if ( x.size() != d.n )
  {
    throw argument_error( fmt::format( "input of arity {} given to a circuit on {} variables", x.size(), d.n ) );
  }
  return depth3_evaluate( d, x.bits() );
}

depth3_size measure( depth3_circuit const& d )
{
  depth3_size s;
  s.gate_count = d.bottom.size() + d.middle.size() + 1u;
  s.top_fanin = d.middle.size();
  for ( auto const& gate : d.bottom )
  {
    s.bottom_fanin = std::max( s.bottom_fanin, static_cast<unsigned>( gate.size() ) );
  }
  for ( auto const& gate : d.middle )
  {
    if ( !gate.literals.empty() )
    {
      s.bottom_fanin = std::max( s.bottom_fanin, 1u );
    }
  }
  return s;
}

composition negate_outer( composition const& c )
{
  if ( c.codomain_size() != 2u )
  {
    throw argument_error( "only binary compositions can be negated" );
  }
  std::map<output_key, unsigned> entries;
  for ( auto const& [key, value] : c.outer().entries() )
  {
    entries.emplace( key, 1u - value );
  }
  return composition( c.num_vars(), c.locality(), c.inners(), outer_function( c.num_inners(), 2u, std::move( entries ) ) );
}

} // namespace comploc
