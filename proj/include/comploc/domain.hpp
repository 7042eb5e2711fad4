/*!
  \file domain.hpp
  \brief Nonempty subsets of the n-cube (membership masks)
*/

#pragma once

#include <cstdint>
#include <vector>

#include "boolfn.hpp"

namespace comploc
{

class domain
{
public:
  domain() = default;

  /*! \brief Entire cube {0,1}^n */
  static domain full( unsigned n );

  /*! \brief Inputs whose Hamming weight lies in [lo, hi] */
  static domain weight_band( unsigned n, unsigned lo, unsigned hi );

  /*! \brief Arbitrary mask of 2^n entries; must contain at least one point */
  static domain from_mask( unsigned n, std::vector<bool> mask );

  unsigned num_vars() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }
  bool is_full() const noexcept { return size_ == ( std::uint64_t( 1 ) << n_ ); }

  bool contains( std::uint32_t x ) const noexcept { return ( words_[x >> 6] >> ( x & 63u ) ) & 1u; }

  /*! \brief Calls fn(x) for every member, in increasing integer order */
  template<typename Fn>
  void for_each( Fn&& fn ) const
  {
    for ( std::size_t w = 0u; w < words_.size(); ++w )
    {
      auto word = words_[w];
      while ( word )
      {
        auto const b = static_cast<unsigned>( __builtin_ctzll( word ) );
        fn( static_cast<std::uint32_t>( ( w << 6 ) | b ) );
        word &= word - 1u;
      }
    }
  }

  /*! \brief Members in coordinate-1-first lexicographic order */
  std::vector<std::uint32_t> lex_members() const;

  bool operator==( domain const& ) const = default;

private:
  unsigned n_ = 0u;
  std::uint64_t size_ = 0u;
  std::vector<std::uint64_t> words_;
};

} // namespace comploc
