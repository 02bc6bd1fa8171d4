#include "saga/random_circuit.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "saga/rng.hpp"

namespace saga
{

Netlist random_circuit( RandomCircuitParams const& params, std::uint64_t seed )
{
  Rng rng( seed );
  auto const in_range = [&]( std::size_t lo, std::size_t hi ) { return lo + uniform_index( rng, std::max( hi, lo ) - lo + 1 ); };

  Netlist netlist;
  netlist.name = fmt::format( "random_{}", seed );
  auto const k = std::max<std::size_t>( in_range( params.min_inputs, params.max_inputs ), 1 );
  auto const m = in_range( params.min_gates, params.max_gates );

  std::vector<std::string> signals;
  for ( std::size_t i = 0; i < k; ++i )
  {
    netlist.inputs.push_back( fmt::format( "i{}", i ) );
    signals.push_back( netlist.inputs.back() );
  }

  std::vector<std::size_t> readers( k + m, 0 );
  for ( std::size_t g = 0; g < m; ++g )
  {
    Gate gate;
    gate.output = fmt::format( "g{}", g );
    auto const a = uniform_index( rng, signals.size() );
    if ( signals.size() < 2 || bernoulli( rng, params.inv_probability ) )
    {
      gate.kind = GateKind::Inv;
      gate.operands = { signals[a] };
      ++readers[a];
    }
    else
    {
      auto b = uniform_index( rng, signals.size() - 1 );
      b += b >= a ? 1 : 0;
      gate.kind = GateKind::Nor2;
      gate.operands = { signals[a], signals[b] };
      ++readers[a];
      ++readers[b];
    }
    netlist.gates.push_back( std::move( gate ) );
    signals.push_back( netlist.gates.back().output );
  }

  for ( std::size_t g = 0; g < m; ++g )
  {
    if ( readers[k + g] == 0 || bernoulli( rng, params.extra_output_probability ) )
      netlist.outputs.push_back( netlist.gates[g].output );
  }
  return netlist;
}

} // namespace saga
