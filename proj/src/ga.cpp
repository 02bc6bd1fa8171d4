#include "saga/ga.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace saga
{

void GaConfig::validate() const
{
  if ( population_size < 2 || population_size % 2 != 0 )
    throw ConfigError( fmt::format( "population_size must be even and >= 2, got {}", population_size ) );
  if ( !( mutation_rate >= 0.0 && mutation_rate <= 1.0 ) )
    throw ConfigError( fmt::format( "mutation_rate must lie in [0, 1], got {}", mutation_rate ) );
  if ( epsilon < 1 )
    throw ConfigError( "epsilon must be >= 1" );
}

nlohmann::json to_json( GaConfig const& cfg )
{
  nlohmann::json j = { { "population_size", cfg.population_size },
                       { "mutation_rate", cfg.mutation_rate },
                       { "epsilon", cfg.epsilon },
                       { "master_seed", cfg.master_seed } };
  j["max_generations"] = cfg.max_generations ? nlohmann::json( *cfg.max_generations ) : nlohmann::json( nullptr );
  return j;
}

GaConfig ga_config_from_json( nlohmann::json const& j, GaConfig defaults )
{
  if ( !j.is_object() )
    throw ConfigError( "GA config must be a JSON object" );
  auto cfg = defaults;
  auto const count = [&]( char const* key, auto& field ) {
    if ( !j.contains( key ) )
      return;
    if ( !j[key].is_number_integer() || j[key].get<std::int64_t>() < 0 )
      throw ConfigError( fmt::format( "'{}' must be a non-negative integer", key ) );
    field = j[key].get<std::remove_reference_t<decltype( field )>>();
  };
  count( "population_size", cfg.population_size );
  count( "epsilon", cfg.epsilon );
  count( "master_seed", cfg.master_seed );
  count( "threads", cfg.threads );
  if ( j.contains( "mutation_rate" ) )
  {
    if ( !j["mutation_rate"].is_number() )
      throw ConfigError( "'mutation_rate' must be a number" );
    cfg.mutation_rate = j["mutation_rate"].get<double>();
  }
  if ( j.contains( "max_generations" ) )
  {
    if ( j["max_generations"].is_null() )
      cfg.max_generations.reset();
    else if ( j["max_generations"].is_number_integer() && j["max_generations"].get<std::int64_t>() >= 0 )
      cfg.max_generations = j["max_generations"].get<std::size_t>();
    else
      throw ConfigError( "'max_generations' must be a non-negative integer or null" );
  }
  for ( auto const& [key, value] : j.items() )
  {
    static constexpr std::array known{ "population_size", "mutation_rate", "epsilon", "master_seed", "max_generations", "threads" };
    if ( std::find( known.begin(), known.end(), key ) == known.end() )
      throw ConfigError( fmt::format( "unknown GA config key '{}'", key ) );
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json( CircuitDag const& dag, GaRun const& run )
{
  auto history = nlohmann::json::array();
  for ( auto const& g : run.fitness_history )
    history.push_back( { { "generation", g.generation },
                         { "best_area", g.best_area },
                         { "generation_best_area", g.generation_best_area },
                         { "median_area", g.median_area } } );
  return { { "config", to_json( run.config ) },
           { "best_sequence", sequence_to_json( dag, run.best_sequence ) },
           { "best_result", to_json( run.best_result ) },
           { "seed_result", to_json( run.seed_result ) },
           { "generations_run", run.generations_run },
           { "stall_at", run.stall_at },
           { "hit_generation_cap", run.hit_generation_cap },
           { "fitness_history", history } };
}

std::string history_csv( GaRun const& run )
{
  std::ostringstream os;
  os << "generation,best_area,median_area\n";
  for ( auto const& g : run.fitness_history )
    os << fmt::format( "{},{},{}\n", g.generation, g.best_area, g.median_area );
  return os.str();
}

Sequence crossover( CircuitDag const& dag, Sequence const& p1, Sequence const& p2, std::size_t point )
{
  point = std::min( point, p1.size() );
  VertexSet taken( dag.num_vertices() );
  Sequence child;
  child.order.reserve( p1.size() );
  for ( std::size_t i = 0; i < point; ++i )
  {
    child.order.push_back( p1.order[i] );
    taken.set( p1.order[i] );
  }
  for ( auto const v : p2.order )
  {
    if ( !taken.test( v ) )
    {
      child.order.push_back( v );
      taken.set( v );
    }
  }
  return child;
}

std::vector<std::size_t> swap_partners( CircuitDag const& dag, Sequence const& s, std::size_t position )
{
  std::vector<std::size_t> partners;
  auto const& order = s.order;
  auto const u = order[position];

  /* a later partner v must not descend from u, have no ancestor inside the
     window, and no descendant of u may sit inside the window either */
  for ( auto j = position + 1; j < order.size(); ++j )
  {
    auto const v = order[j];
    if ( dag.descendants( u ).test( v ) )
      break;
    auto const& anc = dag.ancestors( v );
    bool ok = true;
    for ( auto k = position + 1; k < j && ok; ++k )
      ok = !anc.test( order[k] );
    if ( ok )
      partners.push_back( j );
  }

  /* mirror image for earlier partners */
  for ( auto j = position; j-- > 0; )
  {
    auto const v = order[j];
    if ( dag.ancestors( u ).test( v ) )
      break;
    auto const& desc = dag.descendants( v );
    bool ok = true;
    for ( auto k = j + 1; k < position && ok; ++k )
      ok = !desc.test( order[k] );
    if ( ok )
      partners.push_back( j );
  }

  std::sort( partners.begin(), partners.end() );
  return partners;
}

Sequence mutate( CircuitDag const& dag, Sequence const& s, Rng& rng )
{
  if ( s.size() == 0 )
    return s;
  auto const i = uniform_index( rng, s.size() );
  auto const partners = swap_partners( dag, s, i );
  if ( partners.empty() )
    return s;
  auto const j = partners[uniform_index( rng, partners.size() )];
  auto out = s;
  std::swap( out.order[i], out.order[j] );
  return out;
}

Population initial_population( CircuitDag const& dag, GaConfig const& cfg )
{
  Population population;
  population.reserve( cfg.population_size );
  population.push_back( bfs_seed( dag ) );
  for ( std::size_t i = 1; i < cfg.population_size; ++i )
    population.push_back( random_topo_sort( dag, derive_seed( cfg.master_seed, i ) ) );
  return population;
}

std::vector<std::size_t> evaluate_population( CircuitDag const& dag, Population const& population, std::size_t threads )
{
  std::vector<std::size_t> area( population.size() );
  auto const work = [&]( std::size_t begin, std::size_t end ) {
    for ( auto i = begin; i < end; ++i )
      area[i] = footprint( dag, population[i] ).area;
  };

  try
  {
    threads = std::clamp<std::size_t>( threads, 1, std::max<std::size_t>( population.size(), 1 ) );
    if ( threads == 1 )
    {
      work( 0, population.size() );
      return area;
    }

    std::vector<std::exception_ptr> errors( threads );
    {
      std::vector<std::jthread> pool;
      auto const chunk = ( population.size() + threads - 1 ) / threads;
      for ( std::size_t t = 0; t < threads; ++t )
      {
        auto const begin = std::min( population.size(), t * chunk );
        auto const end = std::min( population.size(), begin + chunk );
        pool.emplace_back( [&, t, begin, end] {
          try
          {
            work( begin, end );
          }
          catch ( ... )
          {
            errors[t] = std::current_exception();
          }
        } );
      }
    }
    for ( auto const& e : errors )
    {
      if ( e )
        std::rethrow_exception( e );
    }
  }
  catch ( InvalidSequence const& e )
  {
    throw InvariantViolation( fmt::format( "population holds an invalid sequence: {}", e.what() ) );
  }
  return area;
}

namespace
{

Population breed( CircuitDag const& dag, Population const& population, std::vector<std::size_t> const& area,
                  GaConfig const& cfg, Rng& rng )
{
  std::vector<std::size_t> rank( population.size() );
  std::iota( rank.begin(), rank.end(), 0 );
  std::stable_sort( rank.begin(), rank.end(), [&]( auto a, auto b ) { return area[a] < area[b]; } );

  auto const survivors = population.size() / 2;
  auto const length = dag.num_gates();
  auto const random_point = [&] { return uniform_index( rng, length + 1 ); };

  Population next;
  next.reserve( population.size() );
  for ( std::size_t i = 0; i < survivors; ++i )
    next.push_back( population[rank[i]] );

  for ( std::size_t i = 0; i + 1 < survivors; i += 2 )
  {
    auto const& a = next[i];
    auto const& b = next[i + 1];
    auto const pa = random_point();
    auto const pb = random_point();
    auto child_ab = crossover( dag, a, b, pa );
    auto child_ba = crossover( dag, b, a, pb );
    next.push_back( std::move( child_ab ) );
    next.push_back( std::move( child_ba ) );
  }
  /* odd survivor count (population_size = 2 mod 4): the last survivor mates with its predecessor once */
  if ( survivors % 2 == 1 )
  {
    auto const& last = next[survivors - 1];
    auto const& mate = next[survivors >= 2 ? survivors - 2 : 0];
    next.push_back( crossover( dag, last, mate, random_point() ) );
  }

  for ( auto& individual : next )
  {
    if ( bernoulli( rng, cfg.mutation_rate ) )
      individual = mutate( dag, individual, rng );
  }
  return next;
}

double median( std::vector<std::size_t> values )
{
  std::sort( values.begin(), values.end() );
  auto const n = values.size();
  if ( n == 0 )
    return 0.0;
  if ( n % 2 == 1 )
    return static_cast<double>( values[n / 2] );
  return 0.5 * ( static_cast<double>( values[n / 2 - 1] ) + static_cast<double>( values[n / 2] ) );
}

constexpr std::uint64_t breeding_stream = 0;

} // namespace

Population step_generation( CircuitDag const& dag, Population const& population, GaConfig const& cfg, Rng& rng )
{
  return breed( dag, population, evaluate_population( dag, population, cfg.threads ), cfg, rng );
}

std::vector<GaRun> optimize_nested( CircuitDag const& dag, GaConfig const& cfg, std::span<std::size_t const> epsilons )
{
  cfg.validate();
  std::vector<std::size_t> budgets( epsilons.begin(), epsilons.end() );
  std::sort( budgets.begin(), budgets.end() );
  budgets.erase( std::unique( budgets.begin(), budgets.end() ), budgets.end() );
  if ( budgets.empty() || budgets.front() < 1 )
    throw ConfigError( "epsilon list must be nonempty and every epsilon >= 1" );

  GaRun run;
  run.config = cfg;
  run.seed_result = footprint( dag, bfs_seed( dag ) );
  run.best_result.area = std::numeric_limits<std::size_t>::max();

  std::vector<GaRun> checkpoints;
  auto const snapshot = [&]( std::size_t epsilon, std::size_t generation, bool capped ) {
    auto copy = run;
    copy.config.epsilon = epsilon;
    copy.generations_run = generation;
    copy.hit_generation_cap = capped;
    checkpoints.push_back( std::move( copy ) );
  };

  Rng rng( derive_seed( cfg.master_seed, breeding_stream ) );
  auto population = initial_population( dag, cfg );
  for ( std::size_t generation = 0;; ++generation )
  {
    auto const area = evaluate_population( dag, population, cfg.threads );
    auto const best = static_cast<std::size_t>( std::min_element( area.begin(), area.end() ) - area.begin() );
    if ( area[best] < run.best_result.area )
    {
      run.best_sequence = population[best];
      run.best_result = { area[best], dag.num_gates(), efficiency( area[best], dag.num_gates() ) };
      run.stall_at = generation;
    }
    run.fitness_history.push_back( { generation, run.best_result.area, area[best], median( area ) } );

    while ( checkpoints.size() < budgets.size() && generation - run.stall_at >= budgets[checkpoints.size()] )
      snapshot( budgets[checkpoints.size()], generation, false );
    if ( checkpoints.size() == budgets.size() )
      break;
    if ( cfg.max_generations && generation >= *cfg.max_generations )
    {
      while ( checkpoints.size() < budgets.size() )
        snapshot( budgets[checkpoints.size()], generation, true );
      break;
    }
    population = breed( dag, population, area, cfg, rng );
  }
  return checkpoints;
}

GaRun optimize( CircuitDag const& dag, GaConfig const& cfg )
{
  std::size_t const epsilon[] = { cfg.epsilon };
  return std::move( optimize_nested( dag, cfg, epsilon ).front() );
}

} // namespace saga
