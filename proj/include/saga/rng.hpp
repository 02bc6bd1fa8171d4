#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace saga
{

/* std::mt19937_64's output sequence is fixed by the standard, unlike the
 * std:: distributions, so draws are built on raw engine output */
using Rng = std::mt19937_64;

/*! \brief splitmix64 finalizer; derives independent stream seeds from one master seed. */
constexpr std::uint64_t derive_seed( std::uint64_t master, std::uint64_t stream )
{
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * ( stream + 1 );
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
  return z ^ ( z >> 31 );
}

/*! \brief Uniform integer in [0, n), n > 0, by rejection. */
inline std::size_t uniform_index( Rng& rng, std::size_t n )
{
  auto const bound = static_cast<std::uint64_t>( n );
  auto const limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do
  {
    x = rng();
  } while ( x >= limit );
  return static_cast<std::size_t>( x % bound );
}

/*! \brief Uniform double in [0, 1) with 53 random bits. */
inline double uniform_unit( Rng& rng )
{
  return static_cast<double>( rng() >> 11 ) * 0x1.0p-53;
}

inline bool bernoulli( Rng& rng, double p )
{
  return uniform_unit( rng ) < p;
}

} // namespace saga
