#pragma once

/*!
  \file simulator.hpp
  \brief Memory-footprint fitness of an execution sequence

  A value occupies a cell from its production step (inputs: from step 0)
  through the step of its last consumer. Primary outputs stay live through
  the final step. Values nobody reads are reclaimed right after the step
  that produced them (inputs: after step 0).
*/

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "dag.hpp"

namespace saga
{

/*! \brief 10^6 / (area * cycles); 0 when nothing executes. */
double efficiency( std::size_t area, std::size_t cycles );

/*! \brief Efficiency rounded to the nearest whole number, for reports only. */
long display_efficiency( double efficiency );

struct EvalResult
{
  std::size_t area{ 0 };
  std::size_t cycles{ 0 };
  double efficiency{ 0.0 };

  bool operator==( EvalResult const& ) const = default;
};

nlohmann::json to_json( EvalResult const& r );

/*! \brief Peak number of simultaneously live values. Throws `InvalidSequence`. */
EvalResult footprint( CircuitDag const& dag, Sequence const& s );

/*! \brief Area only, without the validity check. For callers that already guarantee validity. */
std::size_t peak_liveness_unchecked( CircuitDag const& dag, Sequence const& s );

struct TraceStep
{
  VertexId gate;
  std::size_t cell;
  /* cells reclaimed after this step, ascending */
  std::vector<std::size_t> freed;
};

struct CellTrace
{
  /* cell of each primary input, in declaration order */
  std::vector<std::size_t> input_cells;
  std::vector<TraceStep> steps;
  /* number of distinct cells ever assigned */
  std::size_t peak{ 0 };
};

/*! \brief Mark-and-sweep cell assignment, always taking the lowest free cell. Throws `InvalidSequence`. */
CellTrace cell_trace( CircuitDag const& dag, Sequence const& s );

} // namespace saga
