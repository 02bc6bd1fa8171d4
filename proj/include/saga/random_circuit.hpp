#pragma once

#include <cstddef>
#include <cstdint>

#include "netlist.hpp"

namespace saga
{

struct RandomCircuitParams
{
  std::size_t min_inputs{ 2 };
  std::size_t max_inputs{ 4 };
  std::size_t min_gates{ 8 };
  std::size_t max_gates{ 12 };
  double inv_probability{ 0.3 };
  /* chance that a gate which already has readers is also a primary output */
  double extra_output_probability{ 0.1 };
};

/*! \brief Random acyclic INV/NOR2 netlist; every reader-less gate is a primary output.
 *
 * Operands are drawn uniformly from earlier signals, so the gate list is
 * already in a topological order. Deterministic in `seed`.
 */
Netlist random_circuit( RandomCircuitParams const& params, std::uint64_t seed );

} // namespace saga
