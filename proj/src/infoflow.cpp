#include "comploc/infoflow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include <fmt/format.h>

namespace comploc
{

namespace
{

/* c log2 c with 0 log 0 = 0 */
double xlogx( std::uint64_t c ) noexcept
{
  return c == 0u ? 0.0 : static_cast<double>( c ) * std::log2( static_cast<double>( c ) );
}

/* N * H2(ones / N), from counts */
double scaled_binary_entropy( std::uint64_t total, std::uint64_t ones ) noexcept
{
  return xlogx( total ) - xlogx( ones ) - xlogx( total - ones );
}

double xlogx_real( double p ) noexcept
{
  return p <= 0.0 ? 0.0 : p * std::log2( p );
}

void check_weights( std::span<const double> weights )
{
  if ( weights.empty() )
  {
    throw argument_error( "distribution needs at least one outcome" );
  }
  double sum = 0.0;
  for ( auto w : weights )
  {
    if ( !( w >= 0.0 ) )
    {
      throw argument_error( fmt::format( "negative or undefined weight {}", w ) );
    }
    sum += w;
  }
  if ( std::abs( sum - 1.0 ) > 1e-12 )
  {
    throw argument_error( fmt::format( "weights sum to {:.17g}, not 1", sum ) );
  }
}

void require_weight_function( composition const& c, domain const& d )
{
  if ( d.num_vars() != c.num_vars() )
  {
    throw argument_error( "domain and composition arity differ" );
  }
  std::optional<std::uint32_t> bad;
  d.for_each( [&]( std::uint32_t x ) {
    if ( bad )
      return;
    auto const v = c.try_evaluate( x );
    if ( !v || *v != static_cast<unsigned>( std::popcount( x ) ) )
    {
      bad = x;
    }
  } );
  if ( bad )
  {
    throw precondition_error( fmt::format( "composition does not compute the Hamming weight on the domain (input {})",
                                           bit_vector( c.num_vars(), *bad ).to_string() ) );
  }
}

std::uint32_t support_mask( local_function const& g ) noexcept
{
  std::uint32_t mask = 0u;
  for ( auto i : g.support() )
  {
    mask |= 1u << ( i - 1u );
  }
  return mask;
}

} // namespace

/******************************************************************************
 * distributions                                                              *
 ******************************************************************************/

discrete_distribution::discrete_distribution( std::vector<double> weights ) : weights_( std::move( weights ) )
{
  check_weights( weights_ );
}

discrete_distribution discrete_distribution::uniform( std::size_t outcomes )
{
  return discrete_distribution( std::vector<double>( outcomes, 1.0 / static_cast<double>( outcomes ) ) );
}

joint_distribution::joint_distribution( std::size_t x_outcomes, std::size_t y_outcomes, std::vector<double> weights )
    : rows_( x_outcomes ), cols_( y_outcomes ), weights_( std::move( weights ) )
{
  if ( weights_.size() != rows_ * cols_ )
  {
    throw argument_error( fmt::format( "joint has {} weights, expected {} x {}", weights_.size(), rows_, cols_ ) );
  }
  check_weights( weights_ );
}

discrete_distribution joint_distribution::marginal_x() const
{
  std::vector<double> p( rows_, 0.0 );
  for ( auto x = 0u; x < rows_; ++x )
    for ( auto y = 0u; y < cols_; ++y )
      p[x] += ( *this )( x, y );
  return discrete_distribution( std::move( p ) );
}

discrete_distribution joint_distribution::marginal_y() const
{
  return transposed().marginal_x();
}

joint_distribution joint_distribution::transposed() const
{
  std::vector<double> t( weights_.size() );
  for ( auto x = 0u; x < rows_; ++x )
    for ( auto y = 0u; y < cols_; ++y )
      t[y * rows_ + x] = ( *this )( x, y );
  return joint_distribution( cols_, rows_, std::move( t ) );
}

double entropy( discrete_distribution const& d )
{
  double h = 0.0;
  for ( auto p : d.weights() )
  {
    h -= xlogx_real( p );
  }
  return std::max( h, 0.0 );
}

double conditional_entropy( joint_distribution const& j )
{
  /* H[X|Y] = sum_{x,y} p(x,y) log(p(y) / p(x,y)) */
  auto const py = j.marginal_y();
  double h = 0.0;
  for ( auto x = 0u; x < j.x_outcomes(); ++x )
  {
    for ( auto y = 0u; y < j.y_outcomes(); ++y )
    {
      auto const p = j( x, y );
      if ( p > 0.0 )
      {
        h += p * std::log2( py.weights()[y] / p );
      }
    }
  }
  return std::max( h, 0.0 );
}

double mutual_information( joint_distribution const& j )
{
  return entropy( j.marginal_x() ) - conditional_entropy( j );
}

double binary_entropy( double p )
{
  if ( !( p >= 0.0 && p <= 1.0 ) )
  {
    throw argument_error( fmt::format( "binary entropy of {} outside [0, 1]", p ) );
  }
  return -xlogx_real( p ) - xlogx_real( 1.0 - p );
}

double entropy_from_counts( std::span<const std::uint64_t> counts )
{
  std::uint64_t total = 0u;
  double acc = 0.0;
  for ( auto c : counts )
  {
    total += c;
    acc += xlogx( c );
  }
  if ( total == 0u )
  {
    throw argument_error( "entropy of an empty count vector" );
  }
  return std::max( 0.0, ( xlogx( total ) - acc ) / static_cast<double>( total ) );
}

/******************************************************************************
 * info report                                                                *
 ******************************************************************************/

double info_report::information_sum() const noexcept
{
  double s = 0.0;
  for ( auto const& v : vars )
  {
    s += v.information;
  }
  return s;
}

info_report compute_info_report( composition const& c, domain const& d )
{
  auto const n = c.num_vars();
  if ( n > info_max_vars )
  {
    throw sizing_error( fmt::format( "information report limited to n <= {}, got {}", info_max_vars, n ) );
  }
  if ( d.num_vars() != n )
  {
    throw argument_error( "domain and composition arity differ" );
  }

  struct fiber_counts
  {
    std::uint64_t size = 0u;
    std::vector<std::uint64_t> ones;
  };
  std::unordered_map<output_key, fiber_counts, output_key_hash> fibers;
  std::vector<std::uint64_t> ones( n, 0u );
  std::vector<std::uint64_t> escapes( n, 0u );

  d.for_each( [&]( std::uint32_t x ) {
    auto& fc = fibers[c.inner_outputs( x )];
    if ( fc.ones.empty() )
    {
      fc.ones.assign( n, 0u );
    }
    ++fc.size;
    for ( auto i = 0u; i < n; ++i )
    {
      if ( ( x >> i ) & 1u )
      {
        ++fc.ones[i];
        ++ones[i];
      }
      if ( !d.contains( x ^ ( 1u << i ) ) )
      {
        ++escapes[i];
      }
    }
  } );

  info_report r;
  r.n = n;
  r.m = c.num_inners();
  r.domain_size = d.size();
  r.fibers = fibers.size();
  auto const total = static_cast<double>( d.size() );
  r.input_entropy = std::log2( total );

  std::vector<std::uint64_t> sizes;
  sizes.reserve( fibers.size() );
  for ( auto const& [key, fc] : fibers )
  {
    sizes.push_back( fc.size );
  }
  r.total_information = entropy_from_counts( sizes );

  auto const profile = profile_queries( c );
  for ( auto i = 0u; i < n; ++i )
  {
    double scaled = 0.0;
    for ( auto const& [key, fc] : fibers )
    {
      scaled += scaled_binary_entropy( fc.size, fc.ones[i] );
    }
    variable_info v;
    v.var = i + 1u;
    v.q = profile.q[i];
    v.conditional_entropy = std::max( 0.0, scaled / total );
    v.marginal_entropy = std::max( 0.0, scaled_binary_entropy( d.size(), ones[i] ) / total );
    v.information = v.marginal_entropy - v.conditional_entropy;
    v.escape_count = escapes[i];
    v.escape = static_cast<double>( escapes[i] ) / total;
    r.vars.push_back( v );
  }
  return r;
}

key_lemma_report check_key_lemma( composition const& c, truth_table const& target, domain const& d )
{
  if ( auto cex = verify_against( c, target, d ) )
  {
    throw precondition_error( fmt::format( "composition does not verify against the target: counterexample {}", cex->input.to_string() ) );
  }
  d.for_each( [&]( std::uint32_t x ) {
    if ( target( x ) != static_cast<unsigned>( std::popcount( x ) ) )
    {
      throw precondition_error( fmt::format( "target is not the Hamming weight at {}", bit_vector( d.num_vars(), x ).to_string() ) );
    }
  } );

  auto const info = compute_info_report( c, d );
  key_lemma_report report;
  for ( auto const& v : info.vars )
  {
    key_lemma_entry e;
    e.var = v.var;
    e.q = v.q;
    e.conditional_entropy = v.conditional_entropy;
    e.escape = v.escape;
    e.gap = 1.0 + v.escape - v.conditional_entropy;
    e.nonnegative = e.gap >= -info_tolerance;
    if ( v.escape_count == 0u )
    {
      e.strict = e.gap > info_tolerance;
    }
    if ( v.q == 0u )
    {
      report.every_variable_queried = false;
      e.unqueried_escapes = v.escape_count == info.domain_size;
    }
    report.pass = report.pass && e.nonnegative && e.strict && e.unqueried_escapes;
    report.entries.push_back( e );
  }
  return report;
}

/******************************************************************************
 * counting bound                                                             *
 ******************************************************************************/

std::vector<std::vector<unsigned>> subsets_up_to( unsigned n, unsigned max_size )
{
  std::vector<std::vector<unsigned>> out;
  for ( auto r = 1u; r <= std::min( n, max_size ); ++r )
  {
    std::vector<unsigned> s( r );
    for ( auto t = 0u; t < r; ++t )
      s[t] = t + 1u;
    while ( true )
    {
      out.push_back( s );
      int t = static_cast<int>( r ) - 1;
      while ( t >= 0 && s[t] == n - r + static_cast<unsigned>( t ) + 1u )
        --t;
      if ( t < 0 )
        break;
      ++s[t];
      for ( auto u = static_cast<unsigned>( t ) + 1u; u < r; ++u )
        s[u] = s[u - 1u] + 1u;
    }
  }
  return out;
}

counting_bound_report check_counting_bound( composition const& c, std::vector<std::vector<unsigned>> const& subsets )
{
  auto const n = c.num_vars();
  if ( auto cex = verify_against( c, named_function( named_family::hw, n ), domain::full( n ) ) )
  {
    throw precondition_error( fmt::format( "composition does not compute HW_{}: counterexample {}", n, cex->input.to_string() ) );
  }

  std::vector<std::uint32_t> masks;
  for ( auto const& g : c.inners() )
  {
    masks.push_back( support_mask( g ) );
  }

  counting_bound_report report;
  for ( auto const& s : subsets )
  {
    std::uint32_t set = 0u;
    for ( auto i : s )
    {
      if ( i < 1u || i > n )
      {
        throw argument_error( fmt::format( "subset element {} outside 1..{}", i, n ) );
      }
      set |= 1u << ( i - 1u );
    }
    auto const touching = static_cast<unsigned>( std::count_if( masks.begin(), masks.end(), [set]( auto m ) { return ( m & set ) != 0u; } ) );
    ++report.checked;
    /* touching >= log2(|S|+1)  <=>  2^touching >= |S|+1 */
    auto const ok = touching >= 32u || ( std::uint64_t( 1 ) << touching ) >= std::popcount( set ) + 1u;
    if ( !ok && report.pass )
    {
      report.pass = false;
      report.failing_subset = s;
      report.failing_count = touching;
    }
  }
  return report;
}

/******************************************************************************
 * bias witnesses                                                             *
 ******************************************************************************/

std::vector<bias_candidate> enumerate_bias_candidates( composition const& c, domain const& d, unsigned i )
{
  auto const n = c.num_vars();
  if ( i < 1u || i > n )
  {
    throw argument_error( fmt::format( "variable {} outside 1..{}", i, n ) );
  }
  if ( n > info_max_vars )
  {
    throw sizing_error( fmt::format( "witness extraction limited to n <= {}, got {}", info_max_vars, n ) );
  }
  require_weight_function( c, d );

  std::vector<unsigned> others; /* inners not reading i */
  for ( auto j = 0u; j < c.num_inners(); ++j )
  {
    auto const s = c.inners()[j].support();
    if ( !std::binary_search( s.begin(), s.end(), i ) )
    {
      others.push_back( j );
    }
  }

  struct class_counts
  {
    std::uint64_t size = 0u;
    std::vector<std::uint64_t> pairs;
    std::vector<std::uint64_t> at;
    std::vector<std::uint64_t> ones_at;
  };
  std::map<output_key, class_counts> classes;
  auto const bit = 1u << ( i - 1u );

  d.for_each( [&]( std::uint32_t x ) {
    output_key v( static_cast<unsigned>( others.size() ) );
    for ( auto t = 0u; t < others.size(); ++t )
    {
      v.set( t, c.inners()[others[t]]( x ) );
    }
    auto& cc = classes[v];
    if ( cc.pairs.empty() )
    {
      cc.pairs.assign( n + 1u, 0u );
      cc.at.assign( n + 1u, 0u );
      cc.ones_at.assign( n + 1u, 0u );
    }
    ++cc.size;
    auto const w = static_cast<unsigned>( std::popcount( x ) );
    ++cc.at[w];
    if ( x & bit )
    {
      ++cc.ones_at[w];
    }
    if ( d.contains( x ^ bit ) )
    {
      ++cc.pairs[static_cast<unsigned>( std::popcount( x & ~bit ) )];
    }
  } );

  std::vector<bias_candidate> out;
  for ( auto& [v, cc] : classes )
  {
    bias_candidate cand;
    cand.v = v;
    cand.class_size = cc.size;
    cand.weight_count = static_cast<unsigned>( std::count_if( cc.at.begin(), cc.at.end(), []( auto a ) { return a != 0u; } ) );

    /* largest p_w - p_{w-1} over w in W_v, with p_{-1} = 0; all p_w share the
       denominator |D cap S_v| */
    std::int64_t best_jump = 0;
    bool first = true;
    for ( auto w = 0u; w <= n; ++w )
    {
      if ( cc.at[w] == 0u )
        continue;
      auto const prev = w == 0u ? std::int64_t( 0 ) : static_cast<std::int64_t>( cc.pairs[w - 1u] );
      auto const jump = static_cast<std::int64_t>( cc.pairs[w] ) - prev;
      if ( first || jump > best_jump )
      {
        best_jump = jump;
        cand.w_star = w;
        first = false;
      }
    }
    cand.at_w_star = cc.at[cand.w_star];
    cand.ones_at_w_star = cc.ones_at[cand.w_star];
    cand.pair_counts = std::move( cc.pairs );
    out.push_back( std::move( cand ) );
  }
  return out;
}

bias_witness extract_bias_witness( composition const& c, domain const& d, unsigned i )
{
  auto const profile = profile_queries( c );
  if ( i < 1u || i > c.num_vars() )
  {
    throw argument_error( fmt::format( "variable {} outside 1..{}", i, c.num_vars() ) );
  }
  auto const q = profile.q[i - 1u];
  if ( q == 0u )
  {
    throw precondition_error( fmt::format( "variable {} is not read by any inner function", i ) );
  }

  auto const candidates = enumerate_bias_candidates( c, d, i );
  bias_candidate const* best = nullptr;
  for ( auto const& cand : candidates )
  {
    if ( cand.at_w_star == 0u )
      continue;
    /* |p_cond - 1/2| * mass = |2a - b| / (2 |D cap S_v|), compared exactly */
    auto const score = []( bias_candidate const& b ) {
      auto const a2 = 2u * b.ones_at_w_star;
      return a2 > b.at_w_star ? a2 - b.at_w_star : b.at_w_star - a2;
    };
    if ( !best || score( cand ) * best->class_size > score( *best ) * cand.class_size )
    {
      best = &cand;
    }
  }
  if ( !best )
  {
    throw precondition_error( fmt::format( "no class S_v has positive mass at its jump weight for variable {}", i ) );
  }

  bias_witness w;
  w.var = i;
  w.q = q;
  w.v = best->v;
  w.w_star = best->w_star;
  w.p_cond = best->p_cond();
  w.mass = best->mass();
  w.weight_count = best->weight_count;
  return w;
}

/******************************************************************************
 * information facts                                                          *
 ******************************************************************************/

facts_report validate_information_facts( unsigned trials, std::uint64_t seed )
{
  if ( trials < 1u )
  {
    throw argument_error( "at least one trial is required" );
  }
  std::mt19937_64 rng( seed );
  std::uniform_int_distribution<std::size_t> alphabet( 1u, 4u );
  std::uniform_real_distribution<double> weight( 0.0, 1.0 );
  std::bernoulli_distribution zero( 0.25 );

  facts_report report;
  report.trials = trials;
  auto check = [&]( bool ok, std::string const& what, unsigned trial ) {
    ++report.checks;
    if ( !ok )
    {
      ++report.failures;
      if ( report.messages.size() < 10u )
      {
        report.messages.push_back( fmt::format( "trial {}: {}", trial, what ) );
      }
    }
  };
  auto const tol = info_tolerance;

  for ( auto trial = 0u; trial < trials; ++trial )
  {
    /* random joint of (X1, X2, Y) with some zero cells */
    auto const a = alphabet( rng ), b = alphabet( rng ), c = alphabet( rng );
    std::vector<double> p( a * b * c );
    double sum = 0.0;
    for ( auto& w : p )
    {
      w = zero( rng ) ? 0.0 : weight( rng );
      sum += w;
    }
    if ( sum == 0.0 )
    {
      p[0] = sum = 1.0;
    }
    for ( auto& w : p )
      w /= sum;
    auto cell = [&]( std::size_t x1, std::size_t x2, std::size_t y ) { return p[( x1 * b + x2 ) * c + y]; };

    auto joint_of = [&]( std::size_t rows, std::size_t cols, auto&& index ) {
      std::vector<double> w( rows * cols, 0.0 );
      for ( auto x1 = 0u; x1 < a; ++x1 )
        for ( auto x2 = 0u; x2 < b; ++x2 )
          for ( auto y = 0u; y < c; ++y )
          {
            auto const [r, s] = index( x1, x2, y );
            w[r * cols + s] += cell( x1, x2, y );
          }
      double t = 0.0;
      for ( auto v : w )
        t += v;
      for ( auto& v : w )
        v /= t;
      return joint_distribution( rows, cols, std::move( w ) );
    };

    auto const x1_y = joint_of( a, c, []( auto x1, auto, auto y ) { return std::pair{ x1, y }; } );
    auto const x2_y = joint_of( b, c, []( auto, auto x2, auto y ) { return std::pair{ x2, y }; } );
    auto const x12_y = joint_of( a * b, c, [b]( auto x1, auto x2, auto y ) { return std::pair{ x1 * b + x2, y }; } );
    auto const x1_x2 = joint_of( a, b, []( auto x1, auto x2, auto ) { return std::pair{ x1, x2 }; } );

    auto const h_x1 = entropy( x1_y.marginal_x() );
    auto const h_x2 = entropy( x2_y.marginal_x() );
    auto const h_x1_given_y = conditional_entropy( x1_y );

    /* bounds */
    check( h_x1_given_y >= -tol, "H[X|Y] >= 0", trial );
    check( h_x1_given_y <= h_x1 + tol, "H[X|Y] <= H[X]", trial );
    check( h_x1 <= std::log2( double( a ) ) + tol, "H[X] <= log |D|", trial );
    check( std::abs( entropy( discrete_distribution::uniform( a ) ) - std::log2( double( a ) ) ) <= tol, "uniform attains log |D|", trial );

    /* subadditivity, plain and conditional */
    auto const h_x12 = entropy( x12_y.marginal_x() );
    check( h_x12 <= h_x1 + h_x2 + tol, "H[X1,X2] <= H[X1] + H[X2]", trial );
    check( conditional_entropy( x12_y ) <= h_x1_given_y + conditional_entropy( x2_y ) + tol, "H[X1,X2|Y] <= H[X1|Y] + H[X2|Y]", trial );

    /* independence gives equality */
    {
      auto const m1 = x1_x2.marginal_x();
      auto const m2 = x1_x2.marginal_y();
      std::vector<double> prod;
      for ( auto u : m1.weights() )
        for ( auto v : m2.weights() )
          prod.push_back( u * v );
      double t = 0.0;
      for ( auto v : prod )
        t += v;
      for ( auto& v : prod )
        v /= t;
      auto const indep = joint_distribution( a, b, prod );
      check( std::abs( entropy( discrete_distribution( prod ) ) - entropy( indep.marginal_x() ) - entropy( indep.marginal_y() ) ) <= tol,
             "independent pair: H[X1,X2] = H[X1] + H[X2]", trial );
    }

    /* dependence: X2' = f(X1) */
    {
      std::uniform_int_distribution<std::size_t> image( 0u, b - 1u );
      std::vector<std::size_t> f( a );
      for ( auto& v : f )
        v = image( rng );
      auto const fx_x1 = joint_of( b, a, [&]( auto x1, auto, auto ) { return std::pair{ f[x1], x1 }; } );
      check( conditional_entropy( fx_x1 ) <= tol, "H[f(X1) | X1] = 0", trial );
      auto const y_x1 = x1_y.transposed();
      auto const y_fx = joint_of( c, b, [&]( auto x1, auto, auto y ) { return std::pair{ y, f[x1] }; } );
      check( conditional_entropy( y_x1 ) <= conditional_entropy( y_fx ) + tol, "H[Y | X1] <= H[Y | f(X1)]", trial );
    }

    /* symmetry */
    check( std::abs( mutual_information( x1_y ) - mutual_information( x1_y.transposed() ) ) <= tol, "I[X:Y] = I[Y:X]", trial );
  }
  return report;
}

} // namespace comploc
