#include "saga/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include <fmt/format.h>

namespace saga
{

double efficiency( std::size_t area, std::size_t cycles )
{
  if ( area == 0 || cycles == 0 )
    return 0.0;
  return 1e6 / ( static_cast<double>( area ) * static_cast<double>( cycles ) );
}

long display_efficiency( double efficiency )
{
  return std::lround( efficiency );
}

nlohmann::json to_json( EvalResult const& r )
{
  return { { "area", r.area }, { "cycles", r.cycles }, { "efficiency", r.efficiency } };
}

namespace
{

void require_valid( CircuitDag const& dag, Sequence const& s )
{
  bool valid = false;
  try
  {
    valid = is_valid_sequence( dag, s );
  }
  catch ( WrongVertexSet const& e )
  {
    throw InvalidSequence( e.what() );
  }
  if ( !valid )
    throw InvalidSequence( "sequence executes a gate before one of its operands" );
}

} // namespace

std::size_t peak_liveness_unchecked( CircuitDag const& dag, Sequence const& s )
{
  auto const m = s.size();
  if ( m == 0 )
    return dag.num_inputs();

  std::vector<std::size_t> position( dag.num_vertices(), 0 );
  for ( std::size_t i = 0; i < m; ++i )
    position[s.order[i]] = i;

  /* delta[t] = values becoming live at t minus values that died at t - 1 */
  std::vector<long> delta( m + 1, 0 );
  for ( VertexId v = 0; v < dag.num_vertices(); ++v )
  {
    auto const start = dag.is_input( v ) ? 0 : position[v];
    std::size_t end = start;
    if ( dag.is_output( v ) )
      end = m - 1;
    else
    {
      for ( auto const c : dag.fanout( v ) )
        end = std::max( end, position[c] );
    }
    ++delta[start];
    --delta[end + 1];
  }

  long live = 0;
  long peak = 0;
  for ( std::size_t t = 0; t < m; ++t )
  {
    live += delta[t];
    peak = std::max( peak, live );
  }
  return static_cast<std::size_t>( peak );
}

EvalResult footprint( CircuitDag const& dag, Sequence const& s )
{
  require_valid( dag, s );
  EvalResult r;
  r.area = peak_liveness_unchecked( dag, s );
  r.cycles = s.size();
  r.efficiency = efficiency( r.area, r.cycles );
  return r;
}

CellTrace cell_trace( CircuitDag const& dag, Sequence const& s )
{
  require_valid( dag, s );

  CellTrace trace;
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> free_cells;
  std::size_t next_cell = 0;
  auto const allocate = [&]() {
    if ( free_cells.empty() )
      return next_cell++;
    auto const c = free_cells.top();
    free_cells.pop();
    return c;
  };

  std::vector<std::size_t> cell_of( dag.num_vertices(), 0 );
  std::vector<std::size_t> remaining( dag.num_vertices(), 0 );
  for ( VertexId v = 0; v < dag.num_vertices(); ++v )
    remaining[v] = dag.fanout( v ).size();

  for ( VertexId v = 0; v < dag.num_inputs(); ++v )
  {
    cell_of[v] = allocate();
    trace.input_cells.push_back( cell_of[v] );
  }

  for ( std::size_t t = 0; t < s.size(); ++t )
  {
    auto const g = s.order[t];
    cell_of[g] = allocate();
    TraceStep step{ g, cell_of[g], {} };

    /* sweep: anything with no pending reader and no output role is reclaimed */
    auto const sweep = [&]( VertexId v ) {
      if ( remaining[v] == 0 && !dag.is_output( v ) )
        step.freed.push_back( cell_of[v] );
    };
    for ( auto const u : dag.fanin( g ) )
    {
      --remaining[u];
      sweep( u );
    }
    if ( dag.fanout( g ).empty() )
      sweep( g );
    if ( t == 0 )
    {
      for ( VertexId v = 0; v < dag.num_inputs(); ++v )
      {
        if ( dag.fanout( v ).empty() )
          sweep( v );
      }
    }

    std::sort( step.freed.begin(), step.freed.end() );
    for ( auto const c : step.freed )
      free_cells.push( c );
    trace.steps.push_back( std::move( step ) );
  }

  trace.peak = next_cell;
  return trace;
}

} // namespace saga
