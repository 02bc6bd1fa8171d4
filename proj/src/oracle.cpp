#include "saga/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>

namespace saga
{

TooLarge::TooLarge( std::size_t gate_count, std::size_t limit )
    : InputError( fmt::format( "circuit has {} gates, exhaustive search is limited to {}", gate_count, limit ) ),
      gate_count_( gate_count ),
      limit_( limit )
{
}

nlohmann::json to_json( CircuitDag const& dag, OracleResult const& r )
{
  return { { "min_area", r.min_area },
           { "max_area", r.max_area },
           { "order_count", r.order_count },
           { "argmin_sequence", sequence_to_json( dag, r.argmin_sequence ) } };
}

namespace
{

void check_size( CircuitDag const& dag, std::size_t vertex_limit )
{
  auto const limit = std::min( vertex_limit, max_oracle_limit );
  if ( dag.num_gates() > limit )
    throw TooLarge( dag.num_gates(), limit );
}

using Mask = std::uint64_t;

class IdealSearch
{
public:
  explicit IdealSearch( CircuitDag const& dag ) : dag_( dag ), k_( dag.num_inputs() ), m_( dag.num_gates() )
  {
    full_ = m_ == 0 ? 0 : ( ~Mask{ 0 } >> ( 64 - m_ ) );
    readers_.resize( dag.num_vertices(), 0 );
    gate_fanin_.resize( m_, 0 );
    for ( VertexId v = 0; v < dag.num_vertices(); ++v )
    {
      for ( auto const c : dag.fanout( v ) )
        readers_[v] |= bit( c );
    }
    for ( std::size_t g = 0; g < m_; ++g )
    {
      for ( auto const u : dag.fanin( vertex( g ) ) )
      {
        if ( dag.is_gate( u ) )
          gate_fanin_[g] |= bit( u );
      }
    }
  }

  OracleResult run()
  {
    OracleResult result;
    if ( m_ == 0 )
    {
      result.min_area = result.max_area = k_;
      result.order_count = 1;
      return result;
    }
    auto const& root = solve( 0 );
    result.min_area = root.min;
    result.max_area = root.max;
    result.order_count = root.count;

    /* lexicographically first order whose remaining steps stay within the optimum */
    Mask state = 0;
    while ( state != full_ )
    {
      auto const target = root.min;
      auto const cost = step_cost( state );
      for ( std::size_t g = 0; g < m_; ++g )
      {
        if ( !ready( state, g ) )
          continue;
        auto const next = state | ( Mask{ 1 } << g );
        if ( std::max( cost, memo_.at( next ).min ) <= target )
        {
          result.argmin_sequence.order.push_back( vertex( g ) );
          state = next;
          break;
        }
      }
    }
    return result;
  }

private:
  struct Entry
  {
    std::size_t min;
    std::size_t max;
    std::uint64_t count;
  };

  VertexId vertex( std::size_t g ) const { return static_cast<VertexId>( k_ + g ); }
  Mask bit( VertexId v ) const { return Mask{ 1 } << ( v - k_ ); }

  bool ready( Mask state, std::size_t g ) const
  {
    return !( state >> g & 1u ) && ( gate_fanin_[g] & ~state ) == 0;
  }

  /* cells in use while the next gate executes right after the gates in `state`;
     the operands of that gate are read outside `state`, so they count as live */
  std::size_t step_cost( Mask state ) const
  {
    auto const first_step = state == 0;
    std::size_t live = 1;
    auto const alive = [&]( VertexId v ) {
      return dag_.is_output( v ) || ( readers_[v] & ~state ) != 0;
    };
    for ( VertexId v = 0; v < k_; ++v )
    {
      if ( alive( v ) || ( first_step && readers_[v] == 0 ) )
        ++live;
    }
    for ( auto rest = state; rest != 0; rest &= rest - 1 )
    {
      if ( alive( vertex( static_cast<std::size_t>( std::countr_zero( rest ) ) ) ) )
        ++live;
    }
    return live;
  }

  Entry const& solve( Mask state )
  {
    if ( auto it = memo_.find( state ); it != memo_.end() )
      return it->second;
    Entry entry{ std::numeric_limits<std::size_t>::max(), 0, 0 };
    if ( state == full_ )
      entry = { 0, 0, 1 };
    auto const cost = state == full_ ? 0 : step_cost( state );
    for ( std::size_t g = 0; g < m_ && state != full_; ++g )
    {
      if ( !ready( state, g ) )
        continue;
      auto const sub = solve( state | ( Mask{ 1 } << g ) );
      entry.min = std::min( entry.min, std::max( cost, sub.min ) );
      entry.max = std::max( entry.max, std::max( cost, sub.max ) );
      entry.count += sub.count;
    }
    return memo_.emplace( state, entry ).first->second;
  }

  CircuitDag const& dag_;
  std::size_t k_, m_;
  Mask full_{ 0 };
  std::vector<Mask> readers_;
  std::vector<Mask> gate_fanin_;
  std::unordered_map<Mask, Entry> memo_;
};

class Backtracker
{
public:
  explicit Backtracker( CircuitDag const& dag ) : dag_( dag )
  {
    pending_.resize( dag.num_vertices() );
    missing_.resize( dag.num_vertices() );
    for ( VertexId v = 0; v < dag.num_vertices(); ++v )
    {
      pending_[v] = dag.fanout( v ).size();
      missing_[v] = dag.fanin( v ).size();
    }
    for ( VertexId v = 0; v < dag.num_inputs(); ++v )
    {
      for ( auto const c : dag.fanout( v ) )
        --missing_[c];
    }
    done_.assign( dag.num_vertices(), false );
  }

  OracleResult run()
  {
    result_.min_area = std::numeric_limits<std::size_t>::max();
    if ( dag_.num_gates() == 0 )
    {
      result_.min_area = result_.max_area = dag_.num_inputs();
      result_.order_count = 1;
      return result_;
    }
    recurse( dag_.num_inputs(), 0 );
    return result_;
  }

private:
  void recurse( std::size_t live, std::size_t peak )
  {
    if ( path_.size() == dag_.num_gates() )
    {
      ++result_.order_count;
      if ( peak < result_.min_area )
      {
        result_.min_area = peak;
        result_.argmin_sequence.order = path_;
      }
      result_.max_area = std::max( result_.max_area, peak );
      return;
    }

    for ( auto v = static_cast<VertexId>( dag_.num_inputs() ); v < dag_.num_vertices(); ++v )
    {
      if ( done_[v] || missing_[v] != 0 )
        continue;

      /* execute v, then reclaim whatever became dead */
      auto const during = live + 1;
      std::vector<VertexId> freed;
      done_[v] = true;
      path_.push_back( v );
      for ( auto const u : dag_.fanin( v ) )
      {
        if ( --pending_[u] == 0 && !dag_.is_output( u ) )
          freed.push_back( u );
      }
      if ( dag_.fanout( v ).empty() && !dag_.is_output( v ) )
        freed.push_back( v );
      if ( path_.size() == 1 )
      {
        for ( VertexId i = 0; i < dag_.num_inputs(); ++i )
        {
          if ( dag_.fanout( i ).empty() )
            freed.push_back( i );
        }
      }
      for ( auto const c : dag_.fanout( v ) )
        --missing_[c];

      recurse( during - freed.size(), std::max( peak, during ) );

      for ( auto const c : dag_.fanout( v ) )
        ++missing_[c];
      for ( auto const u : dag_.fanin( v ) )
        ++pending_[u];
      path_.pop_back();
      done_[v] = false;
    }
  }

  CircuitDag const& dag_;
  std::vector<std::size_t> pending_;
  std::vector<std::size_t> missing_;
  std::vector<bool> done_;
  std::vector<VertexId> path_;
  OracleResult result_;
};

} // namespace

OracleResult enumerate_min( CircuitDag const& dag, std::size_t vertex_limit )
{
  check_size( dag, vertex_limit );
  return IdealSearch( dag ).run();
}

OracleResult enumerate_plain( CircuitDag const& dag, std::size_t vertex_limit )
{
  check_size( dag, vertex_limit );
  return Backtracker( dag ).run();
}

} // namespace saga
