/*!
  \file parallel.hpp
  \brief Range splitting over worker threads with ordered result collection

  The worker count defaults to the hardware concurrency and may be capped by
  the environment variable COMPLOC_THREADS.  Callers merge the per-chunk
  results in chunk order, so output never depends on scheduling.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace comploc
{

inline unsigned worker_count() noexcept
{
  unsigned hw = std::max( 1u, std::thread::hardware_concurrency() );
  if ( char const* env = std::getenv( "COMPLOC_THREADS" ) )
  {
    char* end = nullptr;
    auto const cap = std::strtoul( env, &end, 10 );
    if ( end != env && cap >= 1u )
    {
      hw = std::min<unsigned>( hw, static_cast<unsigned>( cap ) );
    }
  }
  return hw;
}

/*! \brief Evaluates fn(begin, end) on consecutive chunks of [0, total)

  Small ranges run inline.  Results are returned in chunk order.
*/
template<typename Result, typename Fn>
std::vector<Result> map_chunks( std::uint64_t total, Fn&& fn, std::uint64_t min_chunk = 4096u )
{
  auto const workers = static_cast<std::uint64_t>( worker_count() );
  auto const chunks = std::max<std::uint64_t>( 1u, std::min( workers, total / std::max<std::uint64_t>( 1u, min_chunk ) ) );
  std::vector<Result> results( chunks );
  if ( chunks == 1u )
  {
    results[0] = fn( std::uint64_t( 0 ), total );
    return results;
  }

  auto const step = ( total + chunks - 1u ) / chunks;
  std::vector<std::thread> threads;
  threads.reserve( chunks );
  for ( std::uint64_t c = 0u; c < chunks; ++c )
  {
    auto const begin = std::min( total, c * step );
    auto const end = std::min( total, begin + step );
    threads.emplace_back( [&results, &fn, c, begin, end]() { results[c] = fn( begin, end ); } );
  }
  for ( auto& t : threads )
  {
    t.join();
  }
  return results;
}

} // namespace comploc
