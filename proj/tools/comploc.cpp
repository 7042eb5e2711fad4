#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <comploc/branching.hpp>
#include <comploc/composition.hpp>
#include <comploc/constructions.hpp>
#include <comploc/depth3.hpp>
#include <comploc/infoflow.hpp>
#include <comploc/io.hpp>
#include <comploc/majreduce.hpp>
#include <comploc/search.hpp>

using namespace comploc;

namespace
{

constexpr int exit_pass = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;

class io_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw io_error( fmt::format( "cannot open '{}'", path ) );
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file( std::string const& path, std::string const& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out || !( out << text ) )
  {
    throw io_error( fmt::format( "cannot write '{}'", path ) );
  }
}

domain domain_for( unsigned n, std::string const& band )
{
  if ( band.empty() )
    return domain::full( n );
  auto const [lo, hi] = parse_band( band );
  return domain::weight_band( n, lo, hi );
}

std::string describe( counterexample const& cex )
{
  return fmt::format( "counterexample x={} expected={} got={}", cex.input.to_string(), cex.expected,
                      cex.actual ? std::to_string( *cex.actual ) : std::string( "undefined" ) );
}

int cmd_construct( std::string const& family, unsigned n, unsigned k, std::string const& out )
{
  auto const f = parse_family( family );
  auto const c = f == named_family::parity ? build_parity( n, k ) : f == named_family::hw ? build_hw( n, k ) : build_maj( n, k );
  write_file( out, serialize_composition( c ) );
  auto const profile = profile_queries( c );
  fmt::print( "{} n={} k={} m={} q_max={} overhead={}\n", family, n, k, c.num_inners(), profile.q_max, profile.overhead.to_string() );
  return exit_pass;
}

int cmd_verify( std::string const& file, std::string const& target, std::string const& band )
{
  auto const c = parse_composition( read_file( file ) );
  auto const d = domain_for( c.num_vars(), band );
  auto const f = named_function( parse_family( target ), c.num_vars() );
  if ( auto cex = verify_against( c, f, d ) )
  {
    fmt::print( "FAIL {}\n", describe( *cex ) );
    return exit_violation;
  }
  fmt::print( "PASS {} inputs\n", d.size() );
  return exit_pass;
}

int cmd_reduce_bp( std::string const& file, unsigned k, std::string const& out )
{
  auto const bp = parse_bp( read_file( file ) );
  auto const c = bp_to_composition( bp, k );
  if ( auto cex = verify_against( c, bp_truth_table( bp ), domain::full( bp.num_vars() ) ) )
  {
    fmt::print( "FAIL {}\n", describe( *cex ) );
    return exit_violation;
  }
  write_file( out, serialize_composition( c ) );
  auto const segments = ( bp.length() + k - 1u ) / k;
  fmt::print( "m={} bound={} segments={} state_bits={}\n", c.num_inners(), segments * bp.width() * state_bits( bp.width() ), segments,
              state_bits( bp.width() ) );
  return exit_pass;
}

int cmd_to_depth3( std::string const& file, std::string const& pol, std::string const& out )
{
  auto const c = parse_composition( read_file( file ) );
  auto const d = composition_to_depth3( c, parse_polarity( pol ) );
  for ( std::uint32_t x = 0u; x < ( 1u << c.num_vars() ); ++x )
  {
    auto const v = c.try_evaluate( x );
    if ( v && ( *v != 0u ) != depth3_evaluate( d, x ) )
    {
      fmt::print( "FAIL circuit disagrees at x={}\n", bit_vector( c.num_vars(), x ).to_string() );
      return exit_violation;
    }
  }
  write_file( out, serialize_depth3( d ) );
  auto const s = measure( d );
  auto const bound = ( std::uint64_t( 1 ) << c.num_inners() ) + std::uint64_t( c.num_inners() ) * ( std::uint64_t( 1 ) << c.locality() ) + 1u;
  fmt::print( "gates={} bottom={} middle={} top_fanin={} bottom_fanin={} bound={}\n", s.gate_count, d.bottom.size(), d.middle.size(), s.top_fanin,
              s.bottom_fanin, bound );
  return exit_pass;
}

int cmd_info( std::string const& file, std::string const& band, std::string const& csv )
{
  auto const c = parse_composition( read_file( file ) );
  auto const r = compute_info_report( c, domain_for( c.num_vars(), band ) );
  auto const text = info_csv( r );
  if ( csv.empty() )
    fmt::print( "{}", text );
  else
    write_file( csv, text );
  fmt::print( "n={} m={} |D|={} H[X]={:.6f} I_total={:.6f} sum_I={:.6f}\n", r.n, r.m, r.domain_size, r.input_entropy, r.total_information,
              r.information_sum() );
  return exit_pass;
}

int cmd_check_lemma( std::string const& file, std::string const& target, std::string const& band )
{
  if ( parse_family( target ) != named_family::hw )
  {
    throw argument_error( "check-lemma supports --target hw only" );
  }
  auto const c = parse_composition( read_file( file ) );
  auto const r = check_key_lemma( c, named_function( named_family::hw, c.num_vars() ), domain_for( c.num_vars(), band ) );
  for ( auto const& e : r.entries )
  {
    fmt::print( "x{} q={} Hcond={:.9f} escape={:.9f} gap={:.9f}{}{}{}\n", e.var, e.q, e.conditional_entropy, e.escape, e.gap,
                e.nonnegative ? "" : " NEGATIVE", e.strict ? "" : " NOT-STRICT", e.unqueried_escapes ? "" : " UNQUERIED-STAYS" );
  }
  fmt::print( "{}\n", r.pass ? "PASS" : "FAIL" );
  return r.pass ? exit_pass : exit_violation;
}

int cmd_reduce_maj( std::string const& file, unsigned t, std::string const& out )
{
  auto const c = parse_composition( read_file( file ) );
  auto const p = end_to_end_pipeline( c, t );
  auto const& r = p.reduction;
  write_file( out, serialize_composition( r.derived ) );
  fmt::print( "control={{{}}} buffer={{{}}} free={{{}}}\n", fmt::join( r.split.control, "," ), fmt::join( r.split.buffer, "," ),
              fmt::join( r.split.free, "," ) );
  fmt::print( "n_free={} band={}:{} b={} m={}\n", r.num_free(), r.lo, r.hi, r.b, p.m );
  double max_escape = 0.0;
  for ( auto const& v : p.info.vars )
    max_escape = std::max( max_escape, v.escape );
  fmt::print( "max_escape={:.9f} escape_bound={:.9f} free_deficit={:.9f} gap_sum={:.9f} lemma={}\n", max_escape, 2.0 / ( t + 2.0 ), p.free_deficit,
              p.gap_sum, p.lemma.pass ? "PASS" : "FAIL" );
  return p.lemma.pass && max_escape <= 2.0 / ( t + 2.0 ) + info_tolerance ? exit_pass : exit_violation;
}

int cmd_witness( std::string const& file, unsigned var, std::string const& band )
{
  auto const c = parse_composition( read_file( file ) );
  auto const w = extract_bias_witness( c, domain_for( c.num_vars(), band ), var );
  fmt::print( "var={} q={} v={} w*={} p_cond={:.9f} mass={:.9f} |W_v|={}\n", w.var, w.q, w.v.size() ? w.v.to_string() : "-", w.w_star, w.p_cond,
              w.mass, w.weight_count );
  return exit_pass;
}

int cmd_search( std::string const& target, unsigned n, unsigned k, unsigned m_max, std::uint64_t nodes, double seconds, std::string const& out )
{
  search_budget budget;
  budget.m_max = m_max;
  budget.node_limit = nodes;
  budget.time_limit = seconds;
  auto const r = exact_cc( named_function( parse_family( target ), n ), k, budget );
  for ( auto const& l : r.levels )
  {
    fmt::print( "m={} {} nodes={}{}\n", l.m,
                l.status == level_status::feasible ? "feasible" : l.status == level_status::infeasible ? "infeasible" : "inconclusive", l.nodes,
                l.filter_refuted ? " (counting filter refutes)" : "" );
  }
  if ( !r.conclusive() )
  {
    fmt::print( "inconclusive: {}; every m < {} is infeasible\n", r.reason, r.proven_lower_bound );
    return exit_violation;
  }
  auto const ratio = static_cast<double>( n ) / static_cast<double>( k );
  fmt::print( "m*={} ({}{:g})\n", *r.m_star, *r.m_star > ratio ? ">" : "=", ratio );
  auto const text = serialize_composition( *r.witness );
  fmt::print( "{}", text );
  if ( !out.empty() )
    write_file( out, text );
  return exit_pass;
}

int cmd_facts( unsigned trials, std::uint64_t seed )
{
  auto const r = validate_information_facts( trials, seed );
  for ( auto const& m : r.messages )
    fmt::print( "FAIL {}\n", m );
  fmt::print( "trials={} checks={} failures={}\n", r.trials, r.checks, r.failures );
  return r.pass() ? exit_pass : exit_violation;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Compositions of local functions: construction, verification and analysis" };
  app.require_subcommand( 1 );
  std::function<int()> run;

  std::string family, file, out, target, band, csv, pol;
  unsigned n = 0u, k = 0u, t = 0u, var = 0u, m_max = 0u, trials = 0u;
  std::uint64_t seed = 0u, node_limit = search_budget{}.node_limit;
  double time_limit = search_budget{}.time_limit;
  std::vector<std::string> const families{ "parity", "hw", "maj" };

  auto* construct = app.add_subcommand( "construct", "Build the standard composition for a named function" );
  construct->add_option( "family", family, "parity, hw or maj" )->required()->check( CLI::IsMember( families ) );
  construct->add_option( "--n", n, "Number of variables" )->required();
  construct->add_option( "--k", k, "Locality" )->required();
  construct->add_option( "-o,--output", out, "Output composition file" )->required();
  construct->callback( [&] { run = [&] { return cmd_construct( family, n, k, out ); }; } );

  auto* verify = app.add_subcommand( "verify", "Check a composition against a named function" );
  verify->add_option( "file", file )->required();
  verify->add_option( "--target", target )->required()->check( CLI::IsMember( families ) );
  verify->add_option( "--band", band, "Weight interval LO:HI" );
  verify->callback( [&] { run = [&] { return cmd_verify( file, target, band ); }; } );

  auto* reduce_bp = app.add_subcommand( "reduce-bp", "Turn a branching program into a composition" );
  reduce_bp->add_option( "file", file )->required();
  reduce_bp->add_option( "--k", k, "Layers per segment" )->required()->check( CLI::PositiveNumber );
  reduce_bp->add_option( "-o,--output", out )->required();
  reduce_bp->callback( [&] { run = [&] { return cmd_reduce_bp( file, k, out ); }; } );

  auto* to_depth3 = app.add_subcommand( "to-depth3", "Lower a binary composition to a depth-3 circuit" );
  to_depth3->add_option( "file", file )->required();
  to_depth3->add_option( "--polarity", pol )->required()->check( CLI::IsMember( { "sigma3", "pi3" } ) );
  to_depth3->add_option( "-o,--output", out )->required();
  to_depth3->callback( [&] { run = [&] { return cmd_to_depth3( file, pol, out ); }; } );

  auto* info = app.add_subcommand( "info", "Per-variable information report" );
  info->add_option( "file", file )->required();
  info->add_option( "--band", band, "Weight interval LO:HI" );
  info->add_option( "--csv", csv, "CSV output (stdout when omitted)" );
  info->callback( [&] { run = [&] { return cmd_info( file, band, csv ); }; } );

  auto* lemma = app.add_subcommand( "check-lemma", "Per-variable entropy gap checks for a Hamming weight composition" );
  lemma->add_option( "file", file )->required();
  lemma->add_option( "--target", target )->required();
  lemma->add_option( "--band", band, "Weight interval LO:HI" );
  lemma->callback( [&] { run = [&] { return cmd_check_lemma( file, target, band ); }; } );

  auto* reduce_maj = app.add_subcommand( "reduce-maj", "Derive a band Hamming weight composition from a majority composition" );
  reduce_maj->add_option( "file", file )->required();
  reduce_maj->add_option( "--t", t, "Number of control variables" )->required();
  reduce_maj->add_option( "-o,--output", out )->required();
  reduce_maj->callback( [&] { run = [&] { return cmd_reduce_maj( file, t, out ); }; } );

  auto* witness = app.add_subcommand( "witness", "Biased weight witness for one variable" );
  witness->add_option( "file", file )->required();
  witness->add_option( "--var", var )->required();
  witness->add_option( "--band", band, "Weight interval LO:HI" );
  witness->callback( [&] { run = [&] { return cmd_witness( file, var, band ); }; } );

  auto* search = app.add_subcommand( "search", "Exact composition complexity by exhaustive search" );
  search->add_option( "--target", target )->required()->check( CLI::IsMember( families ) );
  search->add_option( "--n", n )->required();
  search->add_option( "--k", k )->required();
  search->add_option( "--m-max", m_max, "Largest m to try (default n)" );
  search->add_option( "--node-limit", node_limit );
  search->add_option( "--time-limit", time_limit, "Seconds" );
  search->add_option( "-o,--output", out, "Also write the witness here" );
  search->callback( [&] { run = [&] { return cmd_search( target, n, k, m_max, node_limit, time_limit, out ); }; } );

  auto* facts = app.add_subcommand( "facts", "Check elementary entropy inequalities on random distributions" );
  facts->add_option( "--trials", trials )->required();
  facts->add_option( "--seed", seed )->required();
  facts->callback( [&] { run = [&] { return cmd_facts( trials, seed ); }; } );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? exit_pass : exit_usage;
  }

  try
  {
    return run();
  }
  catch ( precondition_error const& e )
  {
    fmt::print( stderr, "precondition violated: {}\n", e.what() );
    return exit_violation;
  }
  catch ( infeasible_error const& e )
  {
    fmt::print( stderr, "infeasible: {}\n", e.what() );
    return exit_violation;
  }
  catch ( comploc_error const& e )
  {
    fmt::print( stderr, "error: {}\n", e.what() );
    return exit_usage;
  }
  catch ( io_error const& e )
  {
    fmt::print( stderr, "error: {}\n", e.what() );
    return exit_usage;
  }
}
