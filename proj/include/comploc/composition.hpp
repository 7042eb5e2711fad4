/*!
  \file composition.hpp
  \brief Compositions f = h(g_1, ..., g_m) with k-local inner functions

  Inner functions are stored as explicit tables over their support.  The
  outer function is a partial map defined only on inner-output vectors that
  some certified input actually produces; looking up any other vector is an
  error, never a default value.
*/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "boolfn.hpp"
#include "domain.hpp"

namespace comploc
{

/*! \brief Boolean function reading only the coordinates in its support

  Table bit a holds the value when the support coordinates, in ascending
  order, take the bits of a (first support coordinate = least-significant).
*/
class local_function
{
public:
  local_function() = default;
  local_function( std::vector<unsigned> support, std::vector<std::uint64_t> table );

  /*! \brief Tabulates fn over packed support assignments */
  template<typename Fn>
  static local_function from_callable( std::vector<unsigned> support, Fn&& fn )
  {
    auto const size = std::uint64_t( 1 ) << support.size();
    std::vector<std::uint64_t> table( ( size + 63u ) / 64u, 0u );
    for ( std::uint64_t a = 0u; a < size; ++a )
    {
      if ( fn( static_cast<std::uint32_t>( a ) ) )
      {
        table[a >> 6] |= std::uint64_t( 1 ) << ( a & 63u );
      }
    }
    return local_function( std::move( support ), std::move( table ) );
  }

  /*! \brief The projection x_i */
  static local_function variable( unsigned i );

  std::span<const unsigned> support() const noexcept { return support_; }
  unsigned arity() const noexcept { return static_cast<unsigned>( support_.size() ); }
  std::span<const std::uint64_t> table() const noexcept { return table_; }

  bool value_at( std::uint32_t packed ) const noexcept
  {
    return ( table_[packed >> 6] >> ( packed & 63u ) ) & 1u;
  }

  /*! \brief Packs the support coordinates of a full input */
  std::uint32_t pack( std::uint32_t x ) const noexcept
  {
    std::uint32_t a = 0u;
    for ( auto t = 0u; t < support_.size(); ++t )
    {
      a |= ( ( x >> ( support_[t] - 1u ) ) & 1u ) << t;
    }
    return a;
  }

  bool operator()( std::uint32_t x ) const noexcept { return value_at( pack( x ) ); }

  local_function negated() const;

  bool operator==( local_function const& ) const = default;
  auto operator<=>( local_function const& ) const = default;

private:
  std::vector<unsigned> support_;
  std::vector<std::uint64_t> table_;
};

/*! \brief Vector of m inner outputs; inner 1 is position 0 and prints leftmost

  Ordering is the lexicographic order of the printed 0/1 string.
*/
class output_key
{
public:
  output_key() = default;
  explicit output_key( unsigned m ) : m_( m ), words_( ( m + 63u ) / 64u, 0u ) {}

  static output_key from_string( std::string_view text );

  unsigned size() const noexcept { return m_; }
  bool operator[]( unsigned j ) const noexcept { return ( words_[j >> 6] >> ( j & 63u ) ) & 1u; }
  void set( unsigned j, bool b ) noexcept
  {
    auto const mask = std::uint64_t( 1 ) << ( j & 63u );
    words_[j >> 6] = b ? ( words_[j >> 6] | mask ) : ( words_[j >> 6] & ~mask );
  }

  std::string to_string() const;
  std::size_t hash() const noexcept;

  bool operator==( output_key const& ) const = default;
  friend bool operator<( output_key const& a, output_key const& b ) noexcept;

private:
  unsigned m_ = 0u;
  std::vector<std::uint64_t> words_;
};

struct output_key_hash
{
  std::size_t operator()( output_key const& k ) const noexcept { return k.hash(); }
};

/*! \brief Partial map h : {0,1}^m -> {0,...,d-1} */
class outer_function
{
public:
  outer_function() = default;
  outer_function( unsigned m, unsigned codomain_size, std::map<output_key, unsigned> entries );

  unsigned num_inputs() const noexcept { return m_; }
  unsigned codomain_size() const noexcept { return d_; }
  std::map<output_key, unsigned> const& entries() const noexcept { return entries_; }

  std::optional<unsigned> lookup( output_key const& key ) const;

  /*! \brief Lookup that throws precondition_error on unmapped vectors */
  unsigned at( output_key const& key ) const;

  bool operator==( outer_function const& ) const = default;

private:
  unsigned m_ = 0u;
  unsigned d_ = 2u;
  std::map<output_key, unsigned> entries_;
};

class composition
{
public:
  composition() = default;
  composition( unsigned n, unsigned k, std::vector<local_function> inners, outer_function outer );

  unsigned num_vars() const noexcept { return n_; }
  unsigned locality() const noexcept { return k_; }
  unsigned num_inners() const noexcept { return static_cast<unsigned>( inners_.size() ); }
  unsigned codomain_size() const noexcept { return outer_.codomain_size(); }
  std::vector<local_function> const& inners() const noexcept { return inners_; }
  outer_function const& outer() const noexcept { return outer_; }

  output_key inner_outputs( std::uint32_t x ) const;

  /*! \brief h(g(x)), or nothing when g(x) is outside the outer map */
  std::optional<unsigned> try_evaluate( std::uint32_t x ) const;

  bool operator==( composition const& ) const = default;

private:
  unsigned n_ = 0u;
  unsigned k_ = 0u;
  std::vector<local_function> inners_;
  outer_function outer_;
};

/*! \brief Evaluates c at x; throws precondition_error if g(x) is unmapped */
unsigned evaluate( composition const& c, bit_vector const& x );

struct counterexample
{
  bit_vector input;
  unsigned expected = 0u;
  std::optional<unsigned> actual; ///< empty when the outer map is undefined there
};

/*! \brief Lexicographically least x in D with c(x) != f(x), if any */
std::optional<counterexample> verify_against( composition const& c, truth_table const& f, domain const& d );

struct rational
{
  std::uint64_t num = 0u;
  std::uint64_t den = 1u;

  static rational reduced( std::uint64_t num, std::uint64_t den );
  double value() const noexcept { return static_cast<double>( num ) / static_cast<double>( den ); }
  std::string to_string() const;
  bool operator==( rational const& ) const = default;
};

struct query_profile
{
  std::vector<unsigned> q; ///< q[i-1] = number of inners whose support contains i
  unsigned q_max = 0u;
  rational overhead;       ///< m k / n
};

query_profile profile_queries( composition const& c );

struct conflict
{
  bit_vector first;
  bit_vector second;
  unsigned first_value = 0u;
  unsigned second_value = 0u;
};

/*! \brief Minimal partial outer map making h(g) agree with f on D

  Fails with the lexicographically least pair (x, y), x before y, having equal
  inner outputs but different f values.
*/
std::variant<outer_function, conflict> induce_outer( truth_table const& f, std::vector<local_function> const& inners, domain const& d );

/*! \brief Composition on the coordinates `keep` with the others fixed

  Inner supports are intersected with `keep` and renumbered; inners left
  with an empty support are constants and are dropped.  The outer map is
  rebuilt from the values of c on the lifted inputs.
*/
composition restrict_composition( composition const& c, std::span<const unsigned> keep, std::map<unsigned, bool> const& fixing );

/*! \brief The `count` least-queried coordinates, ties to lower index, ascending */
std::vector<unsigned> select_low_query_variables( query_profile const& profile, unsigned count );

/*! \brief From a composition for f_{2n}, a composition for f_n with q_max <= floor(mk/n)

  Keeps the n least-queried coordinates.  Hamming weight and parity fix the
  rest to 0; majority sets floor(n/2) of them to 1 (lowest indices first).
*/
composition low_query_restriction( composition const& c, named_family family );

} // namespace comploc
