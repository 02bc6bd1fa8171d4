#pragma once

/*!
  \file dag.hpp
  \brief Execution DAG of a netlist, the sequence chromosome and seed orderings

  Vertices `0 .. num_inputs()-1` are the primary inputs in declaration
  order; the gates follow in netlist order. Edges run operand -> gate.
  Ancestor and descendant sets are computed once at construction and kept
  as dense bit sets, so comparability queries are O(1).
*/

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <json.hpp>

#include "error.hpp"
#include "netlist.hpp"

namespace saga
{

using VertexId = std::uint32_t;

enum class VertexKind : std::uint8_t
{
  Input,
  Inv,
  Nor2
};

using VertexSet = boost::dynamic_bitset<std::uint64_t>;

/*! \brief Raised by `build_dag` when the gate graph has no topological order. */
class CombinationalCycle : public InputError
{
public:
  explicit CombinationalCycle( std::vector<std::string> cycle );

  std::vector<std::string> const& cycle() const noexcept { return cycle_; }

private:
  std::vector<std::string> cycle_;
};

/*! \brief A sequence that is not a permutation of the gate vertices. */
class WrongVertexSet : public InputError
{
public:
  using InputError::InputError;
};

/*! \brief A topologically invalid (or malformed) sequence handed to evaluation. */
class InvalidSequence : public InputError
{
public:
  using InputError::InputError;
};

/*! \brief Topological order of the gate vertices; inputs are implicitly loaded first. */
struct Sequence
{
  std::vector<VertexId> order;

  std::size_t size() const noexcept { return order.size(); }
  bool operator==( Sequence const& ) const = default;
};

class CircuitDag
{
public:
  std::size_t num_vertices() const noexcept { return kinds_.size(); }
  std::size_t num_inputs() const noexcept { return num_inputs_; }
  std::size_t num_gates() const noexcept { return kinds_.size() - num_inputs_; }

  bool is_input( VertexId v ) const noexcept { return v < num_inputs_; }
  bool is_gate( VertexId v ) const noexcept { return v >= num_inputs_ && v < kinds_.size(); }
  VertexKind kind( VertexId v ) const { return kinds_[v]; }
  std::string const& name( VertexId v ) const { return names_[v]; }

  /*! \brief True when `v`'s value must survive the whole execution. */
  bool is_output( VertexId v ) const { return is_output_[v]; }

  std::span<VertexId const> fanin( VertexId v ) const
  {
    return { fanin_.data() + fanin_offset_[v], fanin_.data() + fanin_offset_[v + 1] };
  }
  std::span<VertexId const> fanout( VertexId v ) const
  {
    return { fanout_.data() + fanout_offset_[v], fanout_.data() + fanout_offset_[v + 1] };
  }

  VertexSet const& ancestors( VertexId v ) const { return ancestors_[v]; }
  VertexSet const& descendants( VertexId v ) const { return descendants_[v]; }

  /*! \brief True when one vertex reaches the other. */
  bool comparable( VertexId u, VertexId v ) const
  {
    return u == v || ancestors_[v].test( u ) || descendants_[v].test( u );
  }

  /*! \brief Looks up a vertex by signal name; throws `InputError` if unknown. */
  VertexId vertex( std::string const& name ) const;

  friend CircuitDag build_dag( Netlist const& netlist );

private:
  std::size_t num_inputs_{ 0 };
  std::vector<VertexKind> kinds_;
  std::vector<std::string> names_;
  std::vector<bool> is_output_;
  std::vector<std::size_t> fanin_offset_, fanout_offset_;
  std::vector<VertexId> fanin_, fanout_;
  std::vector<VertexSet> ancestors_, descendants_;
  std::unordered_map<std::string, VertexId> index_;
};

/*! \brief Builds the execution DAG.
 *
 * Throws `InputError` if the netlist breaks a structural invariant and
 * `CombinationalCycle` if the gates have no topological order.
 */
CircuitDag build_dag( Netlist const& netlist );

/*! \brief Kahn's algorithm with a FIFO queue, inputs enqueued first in declaration order. */
Sequence bfs_seed( CircuitDag const& dag );

/*! \brief Kahn's algorithm choosing uniformly among ready gates; reproducible from the seed. */
Sequence random_topo_sort( CircuitDag const& dag, std::uint64_t rng_seed );

/*! \brief Checks topological validity; throws `WrongVertexSet` if `s` is not a gate permutation. */
bool is_valid_sequence( CircuitDag const& dag, Sequence const& s );

nlohmann::json sequence_to_json( CircuitDag const& dag, Sequence const& s );

/*! \brief Reads a JSON array of gate output names. Throws `InputError` on unknown names. */
Sequence sequence_from_json( CircuitDag const& dag, nlohmann::json const& j );

} // namespace saga
