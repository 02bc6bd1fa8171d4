#pragma once

/*!
  \file oracle.hpp
  \brief Exact minimum footprint over every topological order of a small circuit
*/

#include <cstddef>
#include <cstdint>

#include <json.hpp>

#include "dag.hpp"

namespace saga
{

class TooLarge : public InputError
{
public:
  TooLarge( std::size_t gate_count, std::size_t limit );

  std::size_t gate_count() const noexcept { return gate_count_; }
  std::size_t limit() const noexcept { return limit_; }

private:
  std::size_t gate_count_;
  std::size_t limit_;
};

struct OracleResult
{
  std::size_t min_area{ 0 };
  std::size_t max_area{ 0 };
  /* lexicographically first order (by vertex id) attaining min_area */
  Sequence argmin_sequence;
  std::uint64_t order_count{ 0 };

  bool operator==( OracleResult const& ) const = default;
};

nlohmann::json to_json( CircuitDag const& dag, OracleResult const& r );

inline constexpr std::size_t default_oracle_limit = 12;

/* states are downward-closed gate sets stored as 64-bit masks */
inline constexpr std::size_t max_oracle_limit = 63;

/*! \brief Dynamic program over executed-gate sets. Throws `TooLarge`. */
OracleResult enumerate_min( CircuitDag const& dag, std::size_t vertex_limit = default_oracle_limit );

/*! \brief Plain backtracking over ready sets, visiting every order. Reference for `enumerate_min`. */
OracleResult enumerate_plain( CircuitDag const& dag, std::size_t vertex_limit = 9 );

} // namespace saga
