#include "saga/dag.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include <fmt/format.h>

#include "saga/rng.hpp"

namespace saga
{

CombinationalCycle::CombinationalCycle( std::vector<std::string> cycle )
    : InputError( fmt::format( "combinational cycle: {}", fmt::join( cycle, " -> " ) ) ), cycle_( std::move( cycle ) )
{
}

VertexId CircuitDag::vertex( std::string const& name ) const
{
  auto it = index_.find( name );
  if ( it == index_.end() )
    throw InputError( fmt::format( "unknown signal '{}'", name ) );
  return it->second;
}

CircuitDag build_dag( Netlist const& netlist )
{
  for ( auto const& v : check_semantics( netlist ) )
  {
    if ( v.is_error() )
      throw InputError( fmt::format( "invalid netlist '{}': {}", netlist.name, v.message ) );
  }

  CircuitDag dag;
  auto const k = netlist.inputs.size();
  auto const n = k + netlist.gates.size();
  dag.num_inputs_ = k;
  dag.kinds_.reserve( n );
  dag.names_.reserve( n );
  for ( auto const& s : netlist.inputs )
  {
    dag.index_.emplace( s, static_cast<VertexId>( dag.names_.size() ) );
    dag.kinds_.push_back( VertexKind::Input );
    dag.names_.push_back( s );
  }
  for ( auto const& g : netlist.gates )
  {
    dag.index_.emplace( g.output, static_cast<VertexId>( dag.names_.size() ) );
    dag.kinds_.push_back( g.kind == GateKind::Inv ? VertexKind::Inv : VertexKind::Nor2 );
    dag.names_.push_back( g.output );
  }

  dag.is_output_.assign( n, false );
  for ( auto const& s : netlist.outputs )
    dag.is_output_[dag.index_.at( s )] = true;

  std::vector<std::size_t> fanout_count( n, 0 );
  dag.fanin_offset_.assign( n + 1, 0 );
  for ( std::size_t v = 0; v < n; ++v )
  {
    dag.fanin_offset_[v] = dag.fanin_.size();
    if ( v < k )
      continue;
    for ( auto const& op : netlist.gates[v - k].operands )
    {
      auto const u = dag.index_.at( op );
      dag.fanin_.push_back( u );
      ++fanout_count[u];
    }
  }
  dag.fanin_offset_[n] = dag.fanin_.size();

  dag.fanout_offset_.assign( n + 1, 0 );
  for ( std::size_t v = 0; v < n; ++v )
    dag.fanout_offset_[v + 1] = dag.fanout_offset_[v] + fanout_count[v];
  dag.fanout_.resize( dag.fanin_.size() );
  std::vector<std::size_t> cursor( dag.fanout_offset_.begin(), dag.fanout_offset_.end() - 1 );
  for ( std::size_t v = k; v < n; ++v )
  {
    for ( auto const u : dag.fanin( static_cast<VertexId>( v ) ) )
      dag.fanout_[cursor[u]++] = static_cast<VertexId>( v );
  }

  /* Kahn order, used both for cycle detection and reachability */
  std::vector<std::size_t> indegree( n, 0 );
  for ( std::size_t v = 0; v < n; ++v )
    indegree[v] = dag.fanin_offset_[v + 1] - dag.fanin_offset_[v];
  std::vector<VertexId> topo;
  topo.reserve( n );
  for ( std::size_t v = 0; v < n; ++v )
  {
    if ( indegree[v] == 0 )
      topo.push_back( static_cast<VertexId>( v ) );
  }
  for ( std::size_t head = 0; head < topo.size(); ++head )
  {
    for ( auto const c : dag.fanout( topo[head] ) )
    {
      if ( --indegree[c] == 0 )
        topo.push_back( c );
    }
  }

  if ( topo.size() != n )
  {
    /* every unprocessed gate has an unprocessed operand; walk operands until one repeats */
    std::vector<std::size_t> seen_at( n, n );
    std::vector<VertexId> walk;
    auto v = static_cast<VertexId>( std::find_if( indegree.begin(), indegree.end(), []( auto d ) { return d > 0; } ) - indegree.begin() );
    while ( seen_at[v] == n )
    {
      seen_at[v] = walk.size();
      walk.push_back( v );
      auto const ops = dag.fanin( v );
      v = *std::find_if( ops.begin(), ops.end(), [&]( VertexId u ) { return indegree[u] > 0; } );
    }
    std::vector<std::string> cycle;
    for ( auto i = walk.size(); i-- > seen_at[v]; )
      cycle.push_back( dag.names_[walk[i]] );
    cycle.push_back( dag.names_[walk.back()] );
    throw CombinationalCycle( std::move( cycle ) );
  }

  dag.ancestors_.assign( n, VertexSet( n ) );
  dag.descendants_.assign( n, VertexSet( n ) );
  for ( auto const v : topo )
  {
    for ( auto const u : dag.fanin( v ) )
    {
      dag.ancestors_[v] |= dag.ancestors_[u];
      dag.ancestors_[v].set( u );
    }
  }
  for ( auto it = topo.rbegin(); it != topo.rend(); ++it )
  {
    for ( auto const c : dag.fanout( *it ) )
    {
      dag.descendants_[*it] |= dag.descendants_[c];
      dag.descendants_[*it].set( c );
    }
  }
  return dag;
}

Sequence bfs_seed( CircuitDag const& dag )
{
  auto const n = dag.num_vertices();
  std::vector<std::size_t> indegree( n );
  for ( VertexId v = 0; v < n; ++v )
    indegree[v] = dag.fanin( v ).size();

  std::deque<VertexId> queue;
  for ( VertexId v = 0; v < dag.num_inputs(); ++v )
    queue.push_back( v );

  Sequence s;
  s.order.reserve( dag.num_gates() );
  while ( !queue.empty() )
  {
    auto const v = queue.front();
    queue.pop_front();
    if ( dag.is_gate( v ) )
      s.order.push_back( v );
    for ( auto const c : dag.fanout( v ) )
    {
      if ( --indegree[c] == 0 )
        queue.push_back( c );
    }
  }
  return s;
}

Sequence random_topo_sort( CircuitDag const& dag, std::uint64_t rng_seed )
{
  Rng rng( rng_seed );
  auto const n = dag.num_vertices();
  std::vector<std::size_t> indegree( n );
  for ( VertexId v = 0; v < n; ++v )
    indegree[v] = dag.fanin( v ).size();

  std::vector<VertexId> ready;
  auto const release = [&]( VertexId v ) {
    for ( auto const c : dag.fanout( v ) )
    {
      if ( --indegree[c] == 0 )
        ready.push_back( c );
    }
  };
  for ( VertexId v = 0; v < dag.num_inputs(); ++v )
    release( v );

  Sequence s;
  s.order.reserve( dag.num_gates() );
  while ( !ready.empty() )
  {
    auto const pick = uniform_index( rng, ready.size() );
    auto const v = ready[pick];
    ready[pick] = ready.back();
    ready.pop_back();
    s.order.push_back( v );
    release( v );
  }
  return s;
}

namespace
{

constexpr auto unplaced = std::numeric_limits<std::size_t>::max();

} // namespace

bool is_valid_sequence( CircuitDag const& dag, Sequence const& s )
{
  if ( s.size() != dag.num_gates() )
    throw WrongVertexSet( fmt::format( "sequence has {} entries, circuit has {} gates", s.size(), dag.num_gates() ) );

  std::vector<std::size_t> position( dag.num_vertices(), unplaced );
  for ( std::size_t i = 0; i < s.size(); ++i )
  {
    auto const v = s.order[i];
    if ( !dag.is_gate( v ) )
      throw WrongVertexSet( fmt::format( "sequence entry {} is not a gate vertex", i ) );
    if ( position[v] != unplaced )
      throw WrongVertexSet( fmt::format( "gate '{}' appears twice", dag.name( v ) ) );
    position[v] = i;
  }

  for ( std::size_t i = 0; i < s.size(); ++i )
  {
    for ( auto const u : dag.fanin( s.order[i] ) )
    {
      if ( dag.is_gate( u ) && position[u] > i )
        return false;
    }
  }
  return true;
}

nlohmann::json sequence_to_json( CircuitDag const& dag, Sequence const& s )
{
  auto j = nlohmann::json::array();
  for ( auto const v : s.order )
    j.push_back( dag.name( v ) );
  return j;
}

Sequence sequence_from_json( CircuitDag const& dag, nlohmann::json const& j )
{
  if ( !j.is_array() )
    throw InputError( "sequence JSON must be an array of gate names" );
  Sequence s;
  for ( auto const& item : j )
  {
    if ( !item.is_string() )
      throw InputError( "sequence JSON must be an array of gate names" );
    auto const v = dag.vertex( item.get<std::string>() );
    if ( !dag.is_gate( v ) )
      throw WrongVertexSet( fmt::format( "'{}' is a primary input, not a gate", item.get<std::string>() ) );
    s.order.push_back( v );
  }
  return s;
}

} // namespace saga
