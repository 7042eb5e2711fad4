#include "comploc/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>

#include <fmt/format.h>

#include "comploc/parallel.hpp"

namespace comploc
{

namespace
{

struct candidate
{
  std::vector<unsigned> support;
  std::uint64_t table = 0u; ///< at most 2^3 = 8 bits
  std::uint64_t outputs = 0u; ///< bit x = g(x) over the cube
  std::uint32_t support_mask = 0u;
};

bool depends_on_all( std::uint64_t table, unsigned arity )
{
  for ( auto t = 0u; t < arity; ++t )
  {
    bool depends = false;
    for ( std::uint32_t a = 0u; a < ( 1u << arity ) && !depends; ++a )
    {
      if ( !( ( a >> t ) & 1u ) )
      {
        depends = ( ( table >> a ) & 1u ) != ( ( table >> ( a | ( 1u << t ) ) ) & 1u );
      }
    }
    if ( !depends )
      return false;
  }
  return true;
}

std::vector<std::vector<unsigned>> supports_of_size( unsigned n, unsigned size )
{
  std::vector<std::vector<unsigned>> out;
  for ( std::uint32_t mask = 0u; mask < ( 1u << n ); ++mask )
  {
    if ( static_cast<unsigned>( std::popcount( mask ) ) != size )
      continue;
    std::vector<unsigned> s;
    for ( auto i = 0u; i < n; ++i )
    {
      if ( ( mask >> i ) & 1u )
        s.push_back( i + 1u );
    }
    out.push_back( std::move( s ) );
  }
  return out;
}

std::vector<candidate> enumerate_candidates( unsigned n, unsigned k )
{
  std::vector<candidate> out;
  for ( auto size = 1u; size <= k; ++size )
  {
    for ( auto& support : supports_of_size( n, size ) )
    {
      auto const entries = 1u << size;
      for ( std::uint64_t table = 0u; table < ( std::uint64_t( 1 ) << entries ); table += 2u )
      {
        if ( !depends_on_all( table, size ) )
          continue;
        candidate c;
        c.support = support;
        c.table = table;
        for ( auto i : support )
          c.support_mask |= 1u << ( i - 1u );
        for ( std::uint32_t x = 0u; x < ( 1u << n ); ++x )
        {
          std::uint32_t a = 0u;
          for ( auto t = 0u; t < size; ++t )
            a |= ( ( x >> ( support[t] - 1u ) ) & 1u ) << t;
          if ( ( table >> a ) & 1u )
            c.outputs |= std::uint64_t( 1 ) << x;
        }
        out.push_back( std::move( c ) );
      }
    }
  }
  std::sort( out.begin(), out.end(), []( candidate const& a, candidate const& b ) {
    return std::tie( a.support, a.table ) < std::tie( b.support, b.table );
  } );
  return out;
}

using clock_type = std::chrono::steady_clock;

/* partition of the cube into nonempty classes, each a mask over the points */
struct partition
{
  std::array<std::uint64_t, 64> classes{};
  unsigned size = 0u;
};

/* depth-first walk over increasing index tuples for one level m */
class level_search
{
public:
  level_search( std::vector<candidate> const& cands, std::vector<std::uint64_t> const& value_masks, unsigned n, unsigned k, unsigned m,
                search_budget const& budget, std::atomic<std::uint64_t>& nodes, clock_type::time_point deadline,
                std::vector<bool> const* first_allowed )
      : cands_( cands ), value_masks_( value_masks ), n_( n ), k_( k ), m_( m ), budget_( budget ), nodes_( nodes ), deadline_( deadline ),
        first_allowed_( first_allowed )
  {
  }

  struct chunk_result
  {
    std::optional<std::vector<unsigned>> found;
    bool aborted = false;
  };

  chunk_result run( std::uint64_t first_begin, std::uint64_t first_end )
  {
    chunk_result r;
    partition whole;
    whole.classes[0] = n_ == 6u ? ~std::uint64_t( 0 ) : ( ( std::uint64_t( 1 ) << ( 1u << n_ ) ) - 1u );
    whole.size = 1u;
    std::vector<unsigned> chosen;
    for ( auto idx = first_begin; idx < first_end && !r.found && !aborted_; ++idx )
    {
      if ( first_allowed_ && !( *first_allowed_ )[idx] )
        continue;
      if ( descend( 0u, static_cast<unsigned>( idx ), whole, 0u, chosen ) )
      {
        r.found = chosen;
      }
    }
    r.aborted = aborted_ && !r.found;
    return r;
  }

private:
  /* splits every class by the candidate; fails when some class holds more
     than 2^remaining values of f, since each remaining inner at most doubles it */
  bool refine( partition const& in, std::uint64_t outputs, unsigned remaining, partition& out ) const
  {
    auto const limit = remaining >= 7u ? 64u : ( 1u << remaining );
    out.size = 0u;
    for ( auto c = 0u; c < in.size; ++c )
    {
      for ( auto const part : { in.classes[c] & outputs, in.classes[c] & ~outputs } )
      {
        if ( part == 0u )
          continue;
        unsigned values = 0u;
        for ( auto const v : value_masks_ )
        {
          values += ( part & v ) != 0u ? 1u : 0u;
        }
        if ( values > limit )
          return false;
        out.classes[out.size++] = part;
      }
    }
    return true;
  }

  bool descend( unsigned depth, unsigned idx, partition const& current, std::uint32_t covered, std::vector<unsigned>& chosen )
  {
    auto const count = nodes_.fetch_add( 1u, std::memory_order_relaxed ) + 1u;
    if ( count > budget_.node_limit || ( ( count & 0xfffu ) == 0u && clock_type::now() > deadline_ ) )
    {
      aborted_ = true;
      return false;
    }
    auto const& c = cands_[idx];
    auto const now_covered = covered | c.support_mask;
    auto const depth_after = depth + 1u;
    auto const uncovered = static_cast<unsigned>( n_ - std::popcount( now_covered ) );
    if ( uncovered > ( m_ - depth_after ) * k_ )
      return false;

    partition next;
    if ( !refine( current, c.outputs, m_ - depth_after, next ) )
      return false;

    chosen.push_back( idx );
    if ( depth_after == m_ )
      return true;
    auto const total = static_cast<unsigned>( cands_.size() );
    for ( auto j = idx + 1u; j + ( m_ - depth_after ) <= total && !aborted_; ++j )
    {
      if ( descend( depth_after, j, next, now_covered, chosen ) )
        return true;
    }
    chosen.pop_back();
    return false;
  }

  std::vector<candidate> const& cands_;
  std::vector<std::uint64_t> const& value_masks_;
  unsigned n_, k_, m_;
  search_budget const& budget_;
  std::atomic<std::uint64_t>& nodes_;
  clock_type::time_point deadline_;
  std::vector<bool> const* first_allowed_;
  bool aborted_ = false;
};

/* invariant under every permutation of the coordinates */
bool is_symmetric( truth_table const& f )
{
  auto const n = f.num_vars();
  for ( auto i = 0u; i + 1u < n; ++i )
  {
    for ( std::uint32_t x = 0u; x < ( 1u << n ); ++x )
    {
      auto const a = ( x >> i ) & 1u, b = ( x >> ( i + 1u ) ) & 1u;
      auto const swapped = ( x & ~( 3u << i ) ) | ( a << ( i + 1u ) ) | ( b << i );
      if ( f( x ) != f( swapped ) )
        return false;
    }
  }
  return true;
}

void check_search_size( unsigned n, unsigned k )
{
  if ( n < 1u || n > search_max_vars || k < 1u || k > search_max_locality )
  {
    throw sizing_error( fmt::format( "exact search limited to 1 <= n <= {} and 1 <= k <= {} (got n = {}, k = {})", search_max_vars,
                                     search_max_locality, n, k ) );
  }
}

} // namespace

search_result exact_cc( truth_table const& f, unsigned k, search_budget const& budget )
{
  auto const n = f.num_vars();
  check_search_size( n, k );
  if ( budget.node_limit == 0u || !( budget.time_limit > 0.0 ) )
  {
    throw argument_error( "search budgets must be positive" );
  }
  for ( auto i = 1u; i <= n; ++i )
  {
    if ( !depends_on( f, i ) )
    {
      throw precondition_error( fmt::format( "target does not depend on x{}", i ) );
    }
  }

  auto const kk = std::min( k, n );
  auto const m_max = budget.m_max == 0u ? n : std::min( budget.m_max, n );
  auto const m_min = ( n + kk - 1u ) / kk;

  /* points of the cube carrying each value of f */
  std::vector<std::uint64_t> values;
  {
    std::map<unsigned, std::uint64_t> by_value;
    for ( std::uint32_t x = 0u; x < ( 1u << n ); ++x )
    {
      by_value[f( x )] |= std::uint64_t( 1 ) << x;
    }
    for ( auto const& [v, mask] : by_value )
      values.push_back( mask );
  }

  auto const cands = enumerate_candidates( n, kk );

  /* For symmetric f, relabelling the coordinates of any witness so that its
     least inner reads 1..s gives a lexicographically smaller witness; the
     least witness therefore starts with such an inner. */
  std::optional<std::vector<bool>> first_allowed;
  if ( is_symmetric( f ) )
  {
    first_allowed.emplace( cands.size() );
    for ( auto idx = 0u; idx < cands.size(); ++idx )
    {
      auto const& sup = cands[idx].support;
      ( *first_allowed )[idx] = sup.back() == sup.size();
    }
  }

  search_result result;
  result.candidates = cands.size();
  result.proven_lower_bound = m_min;

  std::atomic<std::uint64_t> nodes{ 0u };
  auto const deadline = clock_type::now() + std::chrono::duration_cast<clock_type::duration>( std::chrono::duration<double>( budget.time_limit ) );

  for ( auto m = m_min; m <= m_max; ++m )
  {
    level_outcome level;
    level.m = m;
    level.filter_refuted = lower_bound_refinement( f, k, m ) == refinement_verdict::refuted;
    auto const before = nodes.load();

    using chunk_result = level_search::chunk_result;
    auto const chunks = map_chunks<chunk_result>(
        cands.size(),
        [&]( std::uint64_t begin, std::uint64_t end ) {
          level_search s( cands, values, n, kk, m, budget, nodes, deadline, first_allowed ? &*first_allowed : nullptr );
          return s.run( begin, end );
        },
        1u );

    std::optional<std::vector<unsigned>> found;
    bool aborted = false;
    for ( auto const& c : chunks )
    {
      if ( c.found && !aborted )
      {
        found = c.found;
        break;
      }
      aborted = aborted || c.aborted;
    }
    if ( !found && !aborted )
    {
      /* a later chunk may hold the only witness when an earlier one aborted */
      for ( auto const& c : chunks )
      {
        if ( c.found )
        {
          found = c.found;
          break;
        }
      }
    }
    level.nodes = nodes.load() - before;

    if ( found )
    {
      std::vector<local_function> inners;
      for ( auto idx : *found )
      {
        inners.emplace_back( cands[idx].support, std::vector<std::uint64_t>{ cands[idx].table } );
      }
      auto induced = induce_outer( f, inners, domain::full( n ) );
      if ( !std::holds_alternative<outer_function>( induced ) )
      {
        throw precondition_error( "search produced a witness without a consistent outer map" );
      }
      composition witness( n, k, std::move( inners ), std::get<outer_function>( std::move( induced ) ) );
      if ( verify_against( witness, f, domain::full( n ) ) )
      {
        throw precondition_error( "search witness fails verification" );
      }
      level.status = level_status::feasible;
      result.levels.push_back( level );
      result.m_star = m;
      result.witness = std::move( witness );
      break;
    }
    if ( aborted )
    {
      level.status = level_status::inconclusive;
      result.levels.push_back( level );
      result.reason = fmt::format( "budget exhausted at m = {} after {} nodes", m, nodes.load() );
      break;
    }
    level.status = level_status::infeasible;
    result.levels.push_back( level );
    result.proven_lower_bound = m + 1u;
  }
  if ( !result.m_star && result.reason.empty() )
  {
    result.reason = fmt::format( "no composition with m <= {}", m_max );
  }
  result.nodes = nodes.load();
  return result;
}

refinement_verdict lower_bound_refinement( truth_table const& f, unsigned k, unsigned m )
{
  auto const n = f.num_vars();
  if ( k < 1u )
  {
    throw argument_error( "locality k must be at least 1" );
  }
  check_search_size( n, std::min( k, search_max_locality ) );
  auto const kk = std::min( k, n );
  if ( m * kk < n )
  {
    return refinement_verdict::refuted;
  }
  if ( m >= n )
  {
    return refinement_verdict::possible; /* one support through each coordinate suffices */
  }

  /* need[S] = ceil(log2 r(S)) */
  auto const full = ( 1u << n ) - 1u;
  std::vector<unsigned> need( std::size_t( 1 ) << n, 0u );
  for ( std::uint32_t s = 1u; s <= full; ++s )
  {
    unsigned r = 0u;
    auto const outside = full & ~s;
    for ( std::uint32_t fix = outside;; fix = ( fix - 1u ) & outside )
    {
      std::vector<bool> seen( f.codomain_size(), false );
      unsigned distinct = 0u;
      for ( std::uint32_t part = s;; part = ( part - 1u ) & s )
      {
        auto const v = f( fix | part );
        if ( !seen[v] )
        {
          seen[v] = true;
          ++distinct;
        }
        if ( part == 0u )
          break;
      }
      r = std::max( r, distinct );
      if ( fix == 0u )
        break;
    }
    need[s] = static_cast<unsigned>( std::bit_width( r - 1u ) );
  }

  std::vector<std::uint32_t> supports;
  for ( std::uint32_t mask = 0u; mask <= full; ++mask )
  {
    if ( static_cast<unsigned>( std::popcount( mask ) ) == kk )
      supports.push_back( mask );
  }

  /* multisets of m supports, nondecreasing indices */
  std::vector<unsigned> pick( m, 0u );
  while ( true )
  {
    std::uint32_t covered = 0u;
    for ( auto p : pick )
      covered |= supports[p];
    if ( covered == full )
    {
      bool ok = true;
      for ( std::uint32_t s = 1u; s <= full && ok; ++s )
      {
        unsigned touching = 0u;
        for ( auto p : pick )
          touching += ( supports[p] & s ) ? 1u : 0u;
        ok = touching >= need[s];
      }
      if ( ok )
        return refinement_verdict::possible;
    }
    int t = static_cast<int>( m ) - 1;
    while ( t >= 0 && pick[t] + 1u == supports.size() )
      --t;
    if ( t < 0 )
      break;
    ++pick[t];
    for ( auto u = static_cast<unsigned>( t ) + 1u; u < m; ++u )
      pick[u] = pick[t];
  }
  return refinement_verdict::refuted;
}

} // namespace comploc
