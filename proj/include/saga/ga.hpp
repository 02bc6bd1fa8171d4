#pragma once

/*!
  \file ga.hpp
  \brief Generational genetic algorithm over topological orders

  One generation: rank by area, drop the worse half, pair neighbours in
  sorted order, produce two ordered-crossover children per pair, then
  mutate every individual with probability `mutation_rate`. Evolution stops
  after `epsilon` generations without improving the best area seen so far.
*/

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dag.hpp"
#include "rng.hpp"
#include "simulator.hpp"

namespace saga
{

class ConfigError : public InputError
{
public:
  using InputError::InputError;
};

struct GaConfig
{
  std::size_t population_size{ 2000 };
  double mutation_rate{ 0.20 };
  std::size_t epsilon{ 50 };
  std::uint64_t master_seed{ 0 };
  std::optional<std::size_t> max_generations{};

  /* worker threads for fitness evaluation; results never depend on it */
  std::size_t threads{ 1 };

  /*! \brief Throws `ConfigError` unless population_size >= 2 and even, rate in [0,1], epsilon >= 1. */
  void validate() const;
};

nlohmann::json to_json( GaConfig const& cfg );

/*! \brief Reads a config object; absent keys keep `defaults`. Throws `ConfigError`. */
GaConfig ga_config_from_json( nlohmann::json const& j, GaConfig defaults = {} );

struct GenerationStats
{
  std::size_t generation{ 0 };
  /* best area seen in any generation so far */
  std::size_t best_area{ 0 };
  /* best area within this generation's population */
  std::size_t generation_best_area{ 0 };
  double median_area{ 0.0 };

  bool operator==( GenerationStats const& ) const = default;
};

struct GaRun
{
  GaConfig config;
  Sequence best_sequence;
  EvalResult best_result;
  /* footprint of the breadth-first seed ordering */
  EvalResult seed_result;
  std::size_t generations_run{ 0 };
  std::size_t stall_at{ 0 };
  bool hit_generation_cap{ false };
  std::vector<GenerationStats> fitness_history;
};

nlohmann::json to_json( CircuitDag const& dag, GaRun const& run );

/*! \brief Per-generation `generation,best_area,median_area` CSV. */
std::string history_csv( GaRun const& run );

using Population = std::vector<Sequence>;

/*! \brief Single-point ordered crossover: `p1[0, point)` then `p2` in order, skipping taken genes. */
Sequence crossover( CircuitDag const& dag, Sequence const& p1, Sequence const& p2, std::size_t point );

/*! \brief Positions that `position` may be transposed with while keeping `s` topologically valid. */
std::vector<std::size_t> swap_partners( CircuitDag const& dag, Sequence const& s, std::size_t position );

/*! \brief Swaps a uniformly chosen position with a uniformly chosen legal partner; unchanged if none exists. */
Sequence mutate( CircuitDag const& dag, Sequence const& s, Rng& rng );

/*! \brief Individual 0 is the breadth-first seed, the rest are randomized Kahn orders. */
Population initial_population( CircuitDag const& dag, GaConfig const& cfg );

/*! \brief Area of every individual, evaluated on `threads` workers.
 *
 * Throws `InvariantViolation` if an individual is not a valid order.
 */
std::vector<std::size_t> evaluate_population( CircuitDag const& dag, Population const& population, std::size_t threads = 1 );

/*! \brief One full generation (evaluate, truncate, breed, mutate). */
Population step_generation( CircuitDag const& dag, Population const& population, GaConfig const& cfg, Rng& rng );

/*! \brief Evolves until `cfg.epsilon` stall generations (or `cfg.max_generations`). */
GaRun optimize( CircuitDag const& dag, GaConfig const& cfg );

/*! \brief One evolution checkpointed at each stall budget in `epsilons`.
 *
 * Result `k` is identical to `optimize` with `epsilon = epsilons[k]` and the
 * same seed, since the shorter run is a prefix of the longer one. Returned
 * in ascending epsilon order.
 */
std::vector<GaRun> optimize_nested( CircuitDag const& dag, GaConfig const& cfg, std::span<std::size_t const> epsilons );

} // namespace saga
