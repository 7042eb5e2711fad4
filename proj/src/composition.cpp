#include "comploc/composition.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "comploc/parallel.hpp"

namespace comploc
{

/******************************************************************************
 * local_function                                                             *
 ******************************************************************************/

local_function::local_function( std::vector<unsigned> support, std::vector<std::uint64_t> table )
    : support_( std::move( support ) ), table_( std::move( table ) )
{
  if ( support_.empty() || support_.size() > max_arity )
  {
    throw argument_error( fmt::format( "inner support size {} outside 1..{}", support_.size(), max_arity ) );
  }
  for ( auto t = 0u; t < support_.size(); ++t )
  {
    if ( support_[t] < 1u || ( t > 0u && support_[t] <= support_[t - 1u] ) )
    {
      throw argument_error( "inner support must be strictly increasing positive coordinates" );
    }
  }
  auto const bits = std::uint64_t( 1 ) << support_.size();
  if ( table_.size() != ( bits + 63u ) / 64u )
  {
    throw argument_error( fmt::format( "inner table has {} words, expected {}", table_.size(), ( bits + 63u ) / 64u ) );
  }
  if ( bits < 64u && ( table_[0] >> bits ) != 0u )
  {
    throw argument_error( "inner table has bits set beyond 2^|support|" );
  }
}

local_function local_function::variable( unsigned i )
{
  return local_function( { i }, { 0b10u } );
}

local_function local_function::negated() const
{
  auto table = table_;
  auto const bits = std::uint64_t( 1 ) << support_.size();
  for ( auto& w : table )
  {
    w = ~w;
  }
  if ( bits < 64u )
  {
    table[0] &= ( std::uint64_t( 1 ) << bits ) - 1u;
  }
  return local_function( support_, std::move( table ) );
}

/******************************************************************************
 * output_key                                                                 *
 ******************************************************************************/

output_key output_key::from_string( std::string_view text )
{
  output_key key( static_cast<unsigned>( text.size() ) );
  for ( auto j = 0u; j < text.size(); ++j )
  {
    if ( text[j] != '0' && text[j] != '1' )
    {
      throw parse_error( fmt::format( "invalid character '{}' in key '{}'", text[j], text ) );
    }
    key.set( j, text[j] == '1' );
  }
  return key;
}

std::string output_key::to_string() const
{
  std::string s( m_, '0' );
  for ( auto j = 0u; j < m_; ++j )
  {
    if ( ( *this )[j] )
    {
      s[j] = '1';
    }
  }
  return s;
}

std::size_t output_key::hash() const noexcept
{
  std::size_t h = m_;
  for ( auto w : words_ )
  {
    h ^= std::hash<std::uint64_t>{}( w ) + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 );
  }
  return h;
}

bool operator<( output_key const& a, output_key const& b ) noexcept
{
  auto const common = std::min( a.words_.size(), b.words_.size() );
  for ( auto w = 0u; w < common; ++w )
  {
    if ( auto const diff = a.words_[w] ^ b.words_[w] )
    {
      auto const bit = std::countr_zero( diff );
      return ( ( a.words_[w] >> bit ) & 1u ) == 0u;
    }
  }
  return a.m_ < b.m_;
}

/******************************************************************************
 * outer_function / composition                                               *
 ******************************************************************************/

outer_function::outer_function( unsigned m, unsigned codomain_size, std::map<output_key, unsigned> entries )
    : m_( m ), d_( codomain_size ), entries_( std::move( entries ) )
{
  if ( codomain_size < 2u || codomain_size > 256u )
  {
    throw argument_error( fmt::format( "codomain size {} outside 2..256", codomain_size ) );
  }
  for ( auto const& [key, value] : entries_ )
  {
    if ( key.size() != m_ )
    {
      throw argument_error( fmt::format( "outer key '{}' has {} bits, expected {}", key.to_string(), key.size(), m_ ) );
    }
    if ( value >= d_ )
    {
      throw argument_error( fmt::format( "outer value {} outside codomain of size {}", value, d_ ) );
    }
  }
}

std::optional<unsigned> outer_function::lookup( output_key const& key ) const
{
  if ( auto it = entries_.find( key ); it != entries_.end() )
  {
    return it->second;
  }
  return std::nullopt;
}

unsigned outer_function::at( output_key const& key ) const
{
  if ( auto v = lookup( key ) )
  {
    return *v;
  }
  throw precondition_error( fmt::format( "outer function undefined on inner outputs {}", key.to_string() ) );
}

composition::composition( unsigned n, unsigned k, std::vector<local_function> inners, outer_function outer )
    : n_( n ), k_( k ), inners_( std::move( inners ) ), outer_( std::move( outer ) )
{
  detail::check_arity( n );
  if ( k < 1u )
  {
    throw argument_error( "locality bound k must be at least 1" );
  }
  if ( inners_.empty() )
  {
    throw argument_error( "a composition needs at least one inner function" );
  }
  if ( outer_.num_inputs() != inners_.size() )
  {
    throw argument_error( fmt::format( "outer function reads {} bits but there are {} inners", outer_.num_inputs(), inners_.size() ) );
  }
  for ( auto j = 0u; j < inners_.size(); ++j )
  {
    auto const& g = inners_[j];
    if ( g.arity() > k_ )
    {
      throw argument_error( fmt::format( "inner {} reads {} variables, more than k = {}", j + 1u, g.arity(), k_ ) );
    }
    if ( g.support().back() > n_ )
    {
      throw argument_error( fmt::format( "inner {} reads coordinate {} beyond n = {}", j + 1u, g.support().back(), n_ ) );
    }
  }
}

output_key composition::inner_outputs( std::uint32_t x ) const
{
  output_key key( num_inners() );
  for ( auto j = 0u; j < inners_.size(); ++j )
  {
    key.set( j, inners_[j]( x ) );
  }
  return key;
}

std::optional<unsigned> composition::try_evaluate( std::uint32_t x ) const
{
  return outer_.lookup( inner_outputs( x ) );
}

unsigned evaluate( composition const& c, bit_vector const& x )
{
  if ( x.size() != c.num_vars() )
  {
    throw argument_error( fmt::format( "input of arity {} given to a composition on {} variables", x.size(), c.num_vars() ) );
  }
  if ( auto v = c.try_evaluate( x.bits() ) )
  {
    return *v;
  }
  throw precondition_error( fmt::format( "input {} lies outside the certified domain (inner outputs {} unmapped)",
                                         x.to_string(), c.inner_outputs( x.bits() ).to_string() ) );
}

std::optional<counterexample> verify_against( composition const& c, truth_table const& f, domain const& d )
{
  auto const n = c.num_vars();
  if ( f.num_vars() != n || d.num_vars() != n )
  {
    throw argument_error( fmt::format( "arity mismatch: composition {}, target {}, domain {}", n, f.num_vars(), d.num_vars() ) );
  }

  /* each chunk reports its lexicographically least failure, merged below */
  auto const partial = map_chunks<std::optional<std::uint32_t>>( std::uint64_t( 1 ) << n, [&]( std::uint64_t begin, std::uint64_t end ) {
    std::optional<std::uint32_t> best;
    for ( auto x64 = begin; x64 < end; ++x64 )
    {
      auto const x = static_cast<std::uint32_t>( x64 );
      if ( !d.contains( x ) )
        continue;
      auto const v = c.try_evaluate( x );
      if ( !v || *v != f( x ) )
      {
        if ( !best || lex_less( x, *best, n ) )
        {
          best = x;
        }
      }
    }
    return best;
  } );

  std::optional<std::uint32_t> best;
  for ( auto const& p : partial )
  {
    if ( p && ( !best || lex_less( *p, *best, n ) ) )
    {
      best = p;
    }
  }
  if ( !best )
  {
    return std::nullopt;
  }
  return counterexample{ bit_vector( n, *best ), f( *best ), c.try_evaluate( *best ) };
}

rational rational::reduced( std::uint64_t num, std::uint64_t den )
{
  if ( den == 0u )
  {
    throw argument_error( "rational with zero denominator" );
  }
  auto const g = std::gcd( num, den );
  return g == 0u ? rational{ 0u, 1u } : rational{ num / g, den / g };
}

std::string rational::to_string() const
{
  return den == 1u ? std::to_string( num ) : fmt::format( "{}/{}", num, den );
}

query_profile profile_queries( composition const& c )
{
  query_profile p;
  p.q.assign( c.num_vars(), 0u );
  for ( auto const& g : c.inners() )
  {
    for ( auto i : g.support() )
    {
      ++p.q[i - 1u];
    }
  }
  p.q_max = *std::max_element( p.q.begin(), p.q.end() );
  p.overhead = rational::reduced( std::uint64_t( c.num_inners() ) * c.locality(), c.num_vars() );
  return p;
}

std::variant<outer_function, conflict> induce_outer( truth_table const& f, std::vector<local_function> const& inners, domain const& d )
{
  auto const n = f.num_vars();
  if ( d.num_vars() != n )
  {
    throw argument_error( "domain and target arity differ" );
  }
  for ( auto const& g : inners )
  {
    if ( g.support().back() > n )
    {
      throw argument_error( fmt::format( "inner support reads coordinate {} beyond n = {}", g.support().back(), n ) );
    }
  }

  struct fiber
  {
    std::uint32_t first;
    bool has_conflict = false;
    std::uint32_t partner = 0u;
  };
  std::unordered_map<output_key, fiber, output_key_hash> fibers;
  auto const m = static_cast<unsigned>( inners.size() );

  /* members arrive in lexicographic order, so the first element of a fiber is
     its least, and the first disagreeing element is its least partner */
  for ( auto x : d.lex_members() )
  {
    output_key key( m );
    for ( auto j = 0u; j < m; ++j )
    {
      key.set( j, inners[j]( x ) );
    }
    auto [it, inserted] = fibers.try_emplace( std::move( key ), fiber{ x } );
    auto& fb = it->second;
    if ( !inserted && !fb.has_conflict && f( x ) != f( fb.first ) )
    {
      fb.has_conflict = true;
      fb.partner = x;
    }
  }

  std::optional<std::pair<std::uint32_t, std::uint32_t>> least;
  for ( auto const& [key, fb] : fibers )
  {
    if ( fb.has_conflict && ( !least || lex_less( fb.first, least->first, n ) ) )
    {
      least = std::make_pair( fb.first, fb.partner );
    }
  }
  if ( least )
  {
    return conflict{ bit_vector( n, least->first ), bit_vector( n, least->second ), f( least->first ), f( least->second ) };
  }

  std::map<output_key, unsigned> entries;
  for ( auto const& [key, fb] : fibers )
  {
    entries.emplace( key, f( fb.first ) );
  }
  return outer_function( m, f.codomain_size(), std::move( entries ) );
}

composition restrict_composition( composition const& c, std::span<const unsigned> keep, std::map<unsigned, bool> const& fixing )
{
  auto const n = c.num_vars();
  std::set<unsigned> kept;
  for ( auto i : keep )
  {
    if ( i < 1u || i > n || !kept.insert( i ).second )
    {
      throw argument_error( fmt::format( "kept coordinate {} out of range or repeated", i ) );
    }
  }
  if ( kept.empty() )
  {
    throw argument_error( "restriction must keep at least one coordinate" );
  }
  std::uint32_t base = 0u;
  for ( auto const& [i, b] : fixing )
  {
    if ( i < 1u || i > n || kept.count( i ) )
    {
      throw argument_error( fmt::format( "fixing of coordinate {} overlaps the kept set or is out of range", i ) );
    }
    base |= b ? ( 1u << ( i - 1u ) ) : 0u;
  }
  if ( kept.size() + fixing.size() != n )
  {
    throw argument_error( "fixing does not cover every coordinate outside the kept set" );
  }

  std::vector<unsigned> order( kept.begin(), kept.end() );
  std::vector<unsigned> position( n + 1u, 0u ); /* new 1-based index, 0 when fixed */
  for ( auto t = 0u; t < order.size(); ++t )
  {
    position[order[t]] = t + 1u;
  }
  auto const r = static_cast<unsigned>( order.size() );
  auto lift = [&]( std::uint32_t y ) {
    auto x = base;
    for ( auto t = 0u; t < r; ++t )
    {
      x |= ( ( y >> t ) & 1u ) << ( order[t] - 1u );
    }
    return x;
  };

  std::vector<local_function> inners;
  for ( auto const& g : c.inners() )
  {
    std::vector<unsigned> support;
    std::vector<unsigned> slots; /* index within g's support of each kept coordinate */
    std::uint32_t fixed_packed = 0u;
    for ( auto t = 0u; t < g.arity(); ++t )
    {
      auto const i = g.support()[t];
      if ( position[i] != 0u )
      {
        support.push_back( position[i] );
        slots.push_back( t );
      }
      else if ( fixing.at( i ) )
      {
        fixed_packed |= 1u << t;
      }
    }
    if ( support.empty() )
    {
      continue;
    }
    inners.push_back( local_function::from_callable( std::move( support ), [&]( std::uint32_t a ) {
      auto packed = fixed_packed;
      for ( auto s = 0u; s < slots.size(); ++s )
      {
        packed |= ( ( a >> s ) & 1u ) << slots[s];
      }
      return g.value_at( packed );
    } ) );
  }
  if ( inners.empty() )
  {
    throw infeasible_error( "restriction leaves no inner function reading a kept coordinate" );
  }

  auto const m = static_cast<unsigned>( inners.size() );
  std::map<output_key, unsigned> entries;
  for ( std::uint64_t y = 0u; y < ( std::uint64_t( 1 ) << r ); ++y )
  {
    auto const x = lift( static_cast<std::uint32_t>( y ) );
    auto const v = c.try_evaluate( x );
    if ( !v )
      continue;
    output_key key( m );
    for ( auto j = 0u; j < m; ++j )
    {
      key.set( j, inners[j]( static_cast<std::uint32_t>( y ) ) );
    }
    auto [it, inserted] = entries.emplace( key, *v );
    if ( !inserted && it->second != *v )
    {
      /* dropped inners are constant, so the kept ones determine g(x) */
      throw infeasible_error( fmt::format( "restricted outer conflict on inner outputs {}", key.to_string() ) );
    }
  }
  return composition( r, c.locality(), std::move( inners ), outer_function( m, c.codomain_size(), std::move( entries ) ) );
}

std::vector<unsigned> select_low_query_variables( query_profile const& profile, unsigned count )
{
  if ( count > profile.q.size() )
  {
    throw argument_error( fmt::format( "cannot select {} of {} variables", count, profile.q.size() ) );
  }
  std::vector<unsigned> vars( profile.q.size() );
  std::iota( vars.begin(), vars.end(), 1u );
  std::stable_sort( vars.begin(), vars.end(), [&]( auto a, auto b ) { return profile.q[a - 1u] < profile.q[b - 1u]; } );
  vars.resize( count );
  std::sort( vars.begin(), vars.end() );
  return vars;
}

composition low_query_restriction( composition const& c, named_family family )
{
  auto const big = c.num_vars();
  if ( big % 2u != 0u || big < 2u )
  {
    throw argument_error( fmt::format( "source composition must have an even number of variables, got {}", big ) );
  }
  auto const n = big / 2u;
  if ( auto cex = verify_against( c, named_function( family, big ), domain::full( big ) ) )
  {
    throw precondition_error( fmt::format( "source does not compute {}_{}: counterexample {}", family_name( family ), big,
                                           cex->input.to_string() ) );
  }

  auto const keep = select_low_query_variables( profile_queries( c ), n );
  std::map<unsigned, bool> fixing;
  auto ones = family == named_family::maj ? n / 2u : 0u;
  for ( auto i = 1u; i <= big; ++i )
  {
    if ( !std::binary_search( keep.begin(), keep.end(), i ) )
    {
      fixing[i] = ones > 0u;
      if ( ones > 0u )
        --ones;
    }
  }

  auto restricted = restrict_composition( c, keep, fixing );
  if ( auto cex = verify_against( restricted, named_function( family, n ), domain::full( n ) ) )
  {
    throw infeasible_error( fmt::format( "restriction does not compute {}_{}: counterexample {}", family_name( family ), n,
                                         cex->input.to_string() ) );
  }
  return restricted;
}

} // namespace comploc
