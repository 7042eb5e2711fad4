#include "comploc/io.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <optional>
#include <set>

#include <fmt/format.h>

namespace comploc
{

namespace
{

/* non-empty, non-comment lines with their 1-based line numbers */
class line_reader
{
public:
  explicit line_reader( std::string_view text )
  {
    unsigned number = 0u;
    while ( !text.empty() )
    {
      auto const end = text.find( '\n' );
      auto line = text.substr( 0u, end );
      text = end == std::string_view::npos ? std::string_view{} : text.substr( end + 1u );
      ++number;
      while ( !line.empty() && ( line.back() == '\r' || line.back() == ' ' || line.back() == '\t' ) )
        line.remove_suffix( 1u );
      while ( !line.empty() && ( line.front() == ' ' || line.front() == '\t' ) )
        line.remove_prefix( 1u );
      if ( line.empty() || line.front() == '#' )
        continue;
      lines_.emplace_back( number, line );
    }
  }

  bool done() const noexcept { return pos_ == lines_.size(); }

  std::vector<std::string_view> next( std::string_view what )
  {
    if ( done() )
    {
      throw parse_error( fmt::format( "unexpected end of input, expected {}", what ) );
    }
    current_ = lines_[pos_].first;
    auto line = lines_[pos_++].second;
    std::vector<std::string_view> tokens;
    while ( !line.empty() )
    {
      auto const start = line.find_first_not_of( " \t" );
      if ( start == std::string_view::npos )
        break;
      line.remove_prefix( start );
      auto const end = line.find_first_of( " \t" );
      tokens.push_back( line.substr( 0u, end ) );
      line = end == std::string_view::npos ? std::string_view{} : line.substr( end );
    }
    return tokens;
  }

  [[noreturn]] void fail( std::string const& message ) const
  {
    throw parse_error( fmt::format( "line {}: {}", current_, message ) );
  }

private:
  std::vector<std::pair<unsigned, std::string_view>> lines_;
  std::size_t pos_ = 0u;
  unsigned current_ = 0u;
};

std::optional<unsigned> to_unsigned( std::string_view s )
{
  unsigned v = 0u;
  auto const [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
  if ( ec != std::errc{} || ptr != s.data() + s.size() || s.empty() )
    return std::nullopt;
  return v;
}

std::optional<int> to_int( std::string_view s )
{
  int v = 0;
  auto const [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
  if ( ec != std::errc{} || ptr != s.data() + s.size() || s.empty() )
    return std::nullopt;
  return v;
}

unsigned expect_unsigned( line_reader const& in, std::string_view token, std::string_view what )
{
  auto const v = to_unsigned( token );
  if ( !v )
    in.fail( fmt::format( "expected a nonnegative integer for {}, got '{}'", what, token ) );
  return *v;
}

void expect_keyword( line_reader const& in, std::vector<std::string_view> const& tokens, std::size_t pos, std::string_view keyword )
{
  if ( pos >= tokens.size() || tokens[pos] != keyword )
  {
    in.fail( fmt::format( "expected '{}'", keyword ) );
  }
}

/* "name=value" */
std::string_view expect_field( line_reader const& in, std::vector<std::string_view> const& tokens, std::size_t pos, std::string_view name )
{
  if ( pos >= tokens.size() || tokens[pos].substr( 0u, name.size() + 1u ) != fmt::format( "{}=", name ) )
  {
    in.fail( fmt::format( "expected field '{}='", name ) );
  }
  return tokens[pos].substr( name.size() + 1u );
}

std::vector<std::string_view> split_commas( std::string_view s )
{
  std::vector<std::string_view> parts;
  if ( s.empty() )
    return parts;
  while ( true )
  {
    auto const comma = s.find( ',' );
    parts.push_back( s.substr( 0u, comma ) );
    if ( comma == std::string_view::npos )
      break;
    s.remove_prefix( comma + 1u );
  }
  return parts;
}

std::string table_to_hex( local_function const& g )
{
  auto const bits = std::uint64_t( 1 ) << g.arity();
  auto const digits = ( bits + 3u ) / 4u;
  std::string out;
  out.reserve( digits );
  for ( auto d = digits; d-- > 0u; )
  {
    unsigned nibble = 0u;
    for ( auto b = 0u; b < 4u; ++b )
    {
      auto const a = d * 4u + b;
      if ( a < bits && g.value_at( static_cast<std::uint32_t>( a ) ) )
        nibble |= 1u << b;
    }
    out.push_back( "0123456789abcdef"[nibble] );
  }
  return out;
}

std::string join_unsigned( std::span<const unsigned> values )
{
  return fmt::format( "{}", fmt::join( values, "," ) );
}

template<typename T>
std::string join_or_dash( std::vector<T> const& values )
{
  return values.empty() ? std::string( "-" ) : fmt::format( "{}", fmt::join( values, "," ) );
}

} // namespace

/******************************************************************************
 * compositions                                                               *
 ******************************************************************************/

std::string serialize_composition( composition const& c )
{
  std::string out = fmt::format( "COMPOSITION n={} k={} m={} d={}\n", c.num_vars(), c.locality(), c.num_inners(), c.codomain_size() );
  for ( auto j = 0u; j < c.num_inners(); ++j )
  {
    auto const& g = c.inners()[j];
    out += fmt::format( "INNER {} VARS {} TABLE {}\n", j + 1u, join_unsigned( g.support() ), table_to_hex( g ) );
  }
  out += fmt::format( "OUTER {}\n", c.outer().entries().size() );
  for ( auto const& [key, value] : c.outer().entries() )
  {
    out += fmt::format( "{} -> {}\n", key.to_string(), value );
  }
  return out;
}

composition parse_composition( std::string_view text )
{
  line_reader in( text );
  auto header = in.next( "COMPOSITION header" );
  expect_keyword( in, header, 0u, "COMPOSITION" );
  if ( header.size() != 5u )
    in.fail( "header must be 'COMPOSITION n= k= m= d='" );
  auto const n = expect_unsigned( in, expect_field( in, header, 1u, "n" ), "n" );
  auto const k = expect_unsigned( in, expect_field( in, header, 2u, "k" ), "k" );
  auto const m = expect_unsigned( in, expect_field( in, header, 3u, "m" ), "m" );
  auto const d = expect_unsigned( in, expect_field( in, header, 4u, "d" ), "d" );
  if ( n < 1u || n > max_arity )
    in.fail( fmt::format( "n = {} outside 1..{}", n, max_arity ) );
  if ( m < 1u )
    in.fail( "m must be at least 1" );

  std::vector<std::optional<local_function>> inners( m );
  for ( auto line = 0u; line < m; ++line )
  {
    auto tokens = in.next( "INNER line" );
    expect_keyword( in, tokens, 0u, "INNER" );
    if ( tokens.size() != 6u )
      in.fail( "expected 'INNER <j> VARS <list> TABLE <hex>'" );
    auto const j = expect_unsigned( in, tokens[1], "inner index" );
    if ( j < 1u || j > m )
      in.fail( fmt::format( "inner index {} outside 1..{}", j, m ) );
    if ( inners[j - 1u] )
      in.fail( fmt::format( "inner {} defined twice", j ) );
    expect_keyword( in, tokens, 2u, "VARS" );
    expect_keyword( in, tokens, 4u, "TABLE" );

    std::vector<unsigned> vars;
    for ( auto part : split_commas( tokens[3] ) )
    {
      auto const v = expect_unsigned( in, part, "variable" );
      if ( v < 1u || v > n )
        in.fail( fmt::format( "variable {} outside 1..{}", v, n ) );
      vars.push_back( v );
    }
    if ( vars.empty() || vars.size() > k || vars.size() > max_arity )
      in.fail( fmt::format( "inner {} reads {} variables; need 1..{}", j, vars.size(), std::min( k, max_arity ) ) );
    if ( std::set<unsigned>( vars.begin(), vars.end() ).size() != vars.size() )
      in.fail( fmt::format( "inner {} lists a variable twice", j ) );

    auto const hex = tokens[5];
    auto const bits = std::uint64_t( 1 ) << vars.size();
    if ( hex.size() != ( bits + 3u ) / 4u )
      in.fail( fmt::format( "table of inner {} needs {} hex digits, got {}", j, ( bits + 3u ) / 4u, hex.size() ) );
    std::vector<bool> listed( bits, false );
    for ( std::size_t p = 0u; p < hex.size(); ++p )
    {
      auto const ch = hex[hex.size() - 1u - p];
      unsigned nibble = 0u;
      if ( ch >= '0' && ch <= '9' )
        nibble = static_cast<unsigned>( ch - '0' );
      else if ( ch >= 'a' && ch <= 'f' )
        nibble = static_cast<unsigned>( ch - 'a' + 10 );
      else if ( ch >= 'A' && ch <= 'F' )
        nibble = static_cast<unsigned>( ch - 'A' + 10 );
      else
        in.fail( fmt::format( "invalid hex digit '{}'", ch ) );
      for ( auto b = 0u; b < 4u; ++b )
      {
        auto const a = p * 4u + b;
        if ( ( nibble >> b ) & 1u )
        {
          if ( a >= bits )
            in.fail( fmt::format( "table of inner {} sets bits beyond 2^{}", j, vars.size() ) );
          listed[a] = true;
        }
      }
    }

    /* reorder the table to ascending support */
    std::vector<unsigned> order( vars.size() );
    std::iota( order.begin(), order.end(), 0u );
    std::sort( order.begin(), order.end(), [&]( unsigned a, unsigned b ) { return vars[a] < vars[b]; } );
    std::vector<unsigned> support;
    for ( auto t : order )
      support.push_back( vars[t] );
    inners[j - 1u] = local_function::from_callable( support, [&]( std::uint32_t sorted ) {
      std::uint32_t a = 0u;
      for ( auto t = 0u; t < order.size(); ++t )
        a |= ( ( sorted >> t ) & 1u ) << order[t];
      return static_cast<bool>( listed[a] );
    } );
  }

  auto outer_line = in.next( "OUTER line" );
  expect_keyword( in, outer_line, 0u, "OUTER" );
  if ( outer_line.size() != 2u )
    in.fail( "expected 'OUTER <count>'" );
  auto const count = expect_unsigned( in, outer_line[1], "outer count" );
  std::map<output_key, unsigned> entries;
  for ( auto e = 0u; e < count; ++e )
  {
    auto tokens = in.next( "outer entry" );
    if ( tokens.size() != 3u || tokens[1] != "->" )
      in.fail( "expected '<key> -> <value>'" );
    if ( tokens[0].size() != m )
      in.fail( fmt::format( "outer key '{}' has {} bits, expected {}", tokens[0], tokens[0].size(), m ) );
    auto key = output_key::from_string( tokens[0] );
    auto const value = expect_unsigned( in, tokens[2], "outer value" );
    if ( !entries.emplace( std::move( key ), value ).second )
      in.fail( fmt::format( "outer key '{}' listed twice", tokens[0] ) );
  }
  if ( !in.done() )
  {
    in.next( "end of input" );
    in.fail( "trailing content after the outer map" );
  }

  std::vector<local_function> gs;
  for ( auto& g : inners )
    gs.push_back( std::move( *g ) );
  try
  {
    return composition( n, k, std::move( gs ), outer_function( m, d, std::move( entries ) ) );
  }
  catch ( argument_error const& e )
  {
    throw parse_error( e.what() );
  }
}

/******************************************************************************
 * branching programs                                                         *
 ******************************************************************************/

std::string serialize_bp( branching_program const& bp )
{
  std::vector<unsigned> accept( bp.accept().begin(), bp.accept().end() );
  std::string out = fmt::format( "BP n={} w={} L={} start={} accept={{{}}}\n", bp.num_vars(), bp.width(), bp.length(), bp.start(),
                                 fmt::join( accept, "," ) );
  for ( auto t = 0u; t < bp.length(); ++t )
  {
    auto const& layer = bp.layers()[t];
    out += fmt::format( "LAYER {} VAR {} D0 {} D1 {}\n", t + 1u, layer.var, fmt::join( layer.delta0, " " ), fmt::join( layer.delta1, " " ) );
  }
  return out;
}

branching_program parse_bp( std::string_view text )
{
  line_reader in( text );
  auto header = in.next( "BP header" );
  expect_keyword( in, header, 0u, "BP" );
  if ( header.size() != 6u )
    in.fail( "header must be 'BP n= w= L= start= accept={...}'" );
  auto const n = expect_unsigned( in, expect_field( in, header, 1u, "n" ), "n" );
  auto const w = expect_unsigned( in, expect_field( in, header, 2u, "w" ), "w" );
  auto const length = expect_unsigned( in, expect_field( in, header, 3u, "L" ), "L" );
  auto const start = expect_unsigned( in, expect_field( in, header, 4u, "start" ), "start" );
  auto accept_text = expect_field( in, header, 5u, "accept" );
  if ( accept_text.size() < 2u || accept_text.front() != '{' || accept_text.back() != '}' )
    in.fail( "accept set must be written {s1,s2,...}" );
  std::set<unsigned> accept;
  for ( auto part : split_commas( accept_text.substr( 1u, accept_text.size() - 2u ) ) )
  {
    if ( !accept.insert( expect_unsigned( in, part, "accepting state" ) ).second )
      in.fail( "accepting state listed twice" );
  }
  if ( w < 2u || w > 1024u )
    in.fail( fmt::format( "width {} outside 2..1024", w ) );

  std::vector<bp_layer> layers;
  for ( auto t = 1u; t <= length; ++t )
  {
    auto tokens = in.next( "LAYER line" );
    expect_keyword( in, tokens, 0u, "LAYER" );
    if ( tokens.size() != 6u + 2u * w )
      in.fail( fmt::format( "expected 'LAYER <t> VAR <i> D0 <{} states> D1 <{} states>'", w, w ) );
    if ( expect_unsigned( in, tokens[1], "layer index" ) != t )
      in.fail( fmt::format( "layers must be numbered consecutively; expected {}", t ) );
    expect_keyword( in, tokens, 2u, "VAR" );
    expect_keyword( in, tokens, 4u, "D0" );
    expect_keyword( in, tokens, 5u + w, "D1" );
    bp_layer layer{ expect_unsigned( in, tokens[3], "variable" ), {}, {} };
    for ( auto s = 0u; s < w; ++s )
    {
      layer.delta0.push_back( expect_unsigned( in, tokens[5u + s], "state" ) );
      layer.delta1.push_back( expect_unsigned( in, tokens[6u + w + s], "state" ) );
    }
    layers.push_back( std::move( layer ) );
  }
  if ( !in.done() )
  {
    in.next( "end of input" );
    in.fail( "trailing content after the last layer" );
  }
  try
  {
    return branching_program( n, w, std::move( layers ), start, std::move( accept ) );
  }
  catch ( argument_error const& e )
  {
    throw parse_error( e.what() );
  }
  catch ( sizing_error const& e )
  {
    throw parse_error( e.what() );
  }
}

/******************************************************************************
 * depth-3 circuits                                                           *
 ******************************************************************************/

std::string serialize_depth3( depth3_circuit const& d )
{
  std::string out = fmt::format( "DEPTH3 n={} kind={} k={} bottom={} middle={}\n", d.n, polarity_name( d.kind ), d.bottom_fanin, d.bottom.size(),
                                 d.middle.size() );
  for ( auto b = 0u; b < d.bottom.size(); ++b )
  {
    out += fmt::format( "BOTTOM {} {}\n", b + 1u, join_or_dash( d.bottom[b] ) );
  }
  for ( auto j = 0u; j < d.middle.size(); ++j )
  {
    std::vector<unsigned> gates;
    for ( auto g : d.middle[j].bottom )
      gates.push_back( g + 1u );
    out += fmt::format( "MIDDLE {} GATES {} LITS {}\n", j + 1u, join_or_dash( gates ), join_or_dash( d.middle[j].literals ) );
  }
  return out;
}

depth3_circuit parse_depth3( std::string_view text )
{
  line_reader in( text );
  auto header = in.next( "DEPTH3 header" );
  expect_keyword( in, header, 0u, "DEPTH3" );
  if ( header.size() != 6u )
    in.fail( "header must be 'DEPTH3 n= kind= k= bottom= middle='" );
  depth3_circuit d;
  d.n = expect_unsigned( in, expect_field( in, header, 1u, "n" ), "n" );
  try
  {
    d.kind = parse_polarity( expect_field( in, header, 2u, "kind" ) );
  }
  catch ( argument_error const& e )
  {
    in.fail( e.what() );
  }
  d.bottom_fanin = expect_unsigned( in, expect_field( in, header, 3u, "k" ), "k" );
  auto const bottom_count = expect_unsigned( in, expect_field( in, header, 4u, "bottom" ), "bottom" );
  auto const middle_count = expect_unsigned( in, expect_field( in, header, 5u, "middle" ), "middle" );
  if ( d.n < 1u || d.n > max_arity )
    in.fail( fmt::format( "n = {} outside 1..{}", d.n, max_arity ) );

  auto literals = [&]( std::string_view list ) {
    std::vector<literal> out;
    if ( list == "-" )
      return out;
    for ( auto part : split_commas( list ) )
    {
      auto const l = to_int( part );
      if ( !l || *l == 0 || static_cast<unsigned>( std::abs( *l ) ) > d.n )
        in.fail( fmt::format( "invalid literal '{}'", part ) );
      out.push_back( *l );
    }
    return out;
  };

  for ( auto b = 1u; b <= bottom_count; ++b )
  {
    auto tokens = in.next( "BOTTOM line" );
    expect_keyword( in, tokens, 0u, "BOTTOM" );
    if ( tokens.size() != 3u || expect_unsigned( in, tokens[1], "gate index" ) != b )
      in.fail( fmt::format( "expected 'BOTTOM {} <literals>'", b ) );
    d.bottom.push_back( literals( tokens[2] ) );
  }
  for ( auto j = 1u; j <= middle_count; ++j )
  {
    auto tokens = in.next( "MIDDLE line" );
    expect_keyword( in, tokens, 0u, "MIDDLE" );
    if ( tokens.size() != 6u || expect_unsigned( in, tokens[1], "gate index" ) != j )
      in.fail( fmt::format( "expected 'MIDDLE {} GATES <list> LITS <list>'", j ) );
    expect_keyword( in, tokens, 2u, "GATES" );
    expect_keyword( in, tokens, 4u, "LITS" );
    middle_gate gate;
    if ( tokens[3] != "-" )
    {
      for ( auto part : split_commas( tokens[3] ) )
      {
        auto const g = expect_unsigned( in, part, "bottom gate" );
        if ( g < 1u || g > bottom_count )
          in.fail( fmt::format( "bottom gate {} outside 1..{}", g, bottom_count ) );
        gate.bottom.push_back( g - 1u );
      }
    }
    gate.literals = literals( tokens[5] );
    d.middle.push_back( std::move( gate ) );
  }
  if ( !in.done() )
  {
    in.next( "end of input" );
    in.fail( "trailing content after the last middle gate" );
  }
  return d;
}

/******************************************************************************
 * reports                                                                    *
 ******************************************************************************/

std::string info_csv( info_report const& r )
{
  std::string out = "var,q,I,Hcond,escape\n";
  unsigned q_sum = 0u;
  double max_escape = 0.0;
  for ( auto const& v : r.vars )
  {
    out += fmt::format( "{},{},{:.12f},{:.12f},{:.12f}\n", v.var, v.q, v.information, v.conditional_entropy, v.escape );
    q_sum += v.q;
    max_escape = std::max( max_escape, v.escape );
  }
  out += fmt::format( "all,{},{:.12f},{:.12f},{:.12f}\n", q_sum, r.total_information, r.input_entropy - r.total_information, max_escape );
  return out;
}

std::pair<unsigned, unsigned> parse_band( std::string_view text )
{
  auto const colon = text.find( ':' );
  if ( colon == std::string_view::npos )
  {
    throw parse_error( fmt::format( "band '{}' must be written LO:HI", text ) );
  }
  auto const lo = to_unsigned( text.substr( 0u, colon ) );
  auto const hi = to_unsigned( text.substr( colon + 1u ) );
  if ( !lo || !hi || *lo > *hi )
  {
    throw parse_error( fmt::format( "band '{}' must be written LO:HI with LO <= HI", text ) );
  }
  return { *lo, *hi };
}

} // namespace comploc
