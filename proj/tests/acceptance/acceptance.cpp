/* Acceptance suite. `acceptance` runs every criterion; `acceptance --criterion N`
   runs one. Each criterion prints a single PASS/FAIL line. */

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <fixtures.hpp>
#include <reference.hpp>

#include <saga/bench.hpp>
#include <saga/dag.hpp>
#include <saga/ga.hpp>
#include <saga/oracle.hpp>
#include <saga/random_circuit.hpp>
#include <saga/simulator.hpp>

using namespace saga;

namespace
{

struct Outcome
{
  bool pass;
  std::string detail;
};

/* pinned tolerances */
constexpr std::size_t oracle_runs = 100;
constexpr std::size_t oracle_required_hits = 95;
constexpr double oracle_time_limit_s = 60.0;
constexpr std::size_t closure_trials = 10000;
constexpr std::size_t exactness_pairs = 1000;
constexpr double mean_tolerance_pp = 0.5;
constexpr double p_value_target = 0.029;
constexpr double p_value_tolerance = 0.005;

RandomCircuitParams oracle_corpus()
{
  return { 2, 4, 8, 12, 0.3, 0.1 };
}

Outcome oracle_equivalence()
{
  auto const start = std::chrono::steady_clock::now();
  std::size_t hits = 0;
  std::vector<std::uint64_t> misses;
  for ( std::uint64_t i = 0; i < oracle_runs; ++i )
  {
    auto const dag = build_dag( random_circuit( oracle_corpus(), 1000 + i ) );
    GaConfig cfg;
    cfg.population_size = 200;
    cfg.mutation_rate = 0.2;
    cfg.epsilon = 50;
    cfg.master_seed = i;
    auto const found = optimize( dag, cfg ).best_result.area;
    if ( found == enumerate_min( dag ).min_area )
      ++hits;
    else
      misses.push_back( 1000 + i );
  }
  auto const seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  auto const pass = hits >= oracle_required_hits && seconds < oracle_time_limit_s;
  return { pass, fmt::format( "{}/{} runs hit the exhaustive minimum (need {}), {:.2f} s (limit {:.0f} s)", hits, oracle_runs,
                              oracle_required_hits, seconds, oracle_time_limit_s ) };
}

Outcome operator_closure()
{
  Rng rng( 2024 );
  std::size_t valid_cross = 0, valid_mut = 0;
  for ( std::size_t t = 0; t < closure_trials; ++t )
  {
    auto const dag = build_dag( random_circuit( { 1, 6, 1, 30, 0.3, 0.1 }, t ) );
    auto const a = random_topo_sort( dag, rng() );
    auto const b = random_topo_sort( dag, rng() );
    auto const point = uniform_index( rng, dag.num_gates() + 1 );
    valid_cross += is_valid_sequence( dag, crossover( dag, a, b, point ) );
    valid_mut += is_valid_sequence( dag, mutate( dag, a, rng ) );
  }
  auto const pass = valid_cross == closure_trials && valid_mut == closure_trials;
  return { pass, fmt::format( "crossover {}/{} valid, mutation {}/{} valid", valid_cross, closure_trials, valid_mut, closure_trials ) };
}

Outcome fitness_exactness()
{
  std::size_t trace_agree = 0, small_pairs = 0, small_agree = 0;
  for ( std::size_t i = 0; i < exactness_pairs; ++i )
  {
    /* alternate between graphs small enough for permutation filtering and larger ones */
    auto const small = i % 2 == 0;
    auto const n = small ? random_circuit( { 1, 4, 1, 7, 0.3, 0.15 }, i ) : random_circuit( { 1, 6, 8, 30, 0.3, 0.1 }, i );
    auto const dag = build_dag( n );
    auto const s = random_topo_sort( dag, i * 31 + 7 );
    auto const area = footprint( dag, s ).area;
    trace_agree += area == cell_trace( dag, s ).peak;
    if ( small )
    {
      ++small_pairs;
      auto const scan = ref::permutation_scan( n );
      auto const it = scan.areas.find( fixtures::names_of( dag, s ) );
      small_agree += it != scan.areas.end() && it->second == area;
    }
  }
  auto const pass = trace_agree == exactness_pairs && small_agree == small_pairs;
  return { pass, fmt::format( "footprint == cell trace peak on {}/{}; == permutation-filter liveness on {}/{} (<= 7 gates)",
                              trace_agree, exactness_pairs, small_agree, small_pairs ) };
}

Outcome figure_one()
{
  auto const n = fixtures::circuit( "figure1" );
  auto const dag = build_dag( n );
  std::vector<std::string> const c_first{ "C", "D", "E", "F" }, d_first{ "D", "C", "E", "F" };
  auto const a = footprint( dag, fixtures::sequence_of( dag, c_first ) ).area;
  auto const b = footprint( dag, fixtures::sequence_of( dag, d_first ) ).area;
  auto const oracle = enumerate_min( dag );
  auto const derived_a = ref::set_liveness( n, c_first );
  auto const derived_b = ref::set_liveness( n, d_first );
  auto const pass = oracle.order_count == 2 && a != b && oracle.min_area == std::min( a, b ) &&
                    fixtures::names_of( dag, oracle.argmin_sequence ) == ( a < b ? c_first : d_first ) && a == derived_a &&
                    b == derived_b;
  return { pass, fmt::format( "{} valid orders; C-first area {}, D-first area {} (independent: {} vs {}); oracle minimum {} via {}",
                              oracle.order_count, a, b, derived_a, derived_b, oracle.min_area,
                              fmt::join( fixtures::names_of( dag, oracle.argmin_sequence ), "," ) ) };
}

Outcome efficiency_arithmetic()
{
  struct Spot
  {
    char const* name;
    std::size_t cycles, area;
    long expected;
  };
  bool pass = true;
  std::string detail;
  for ( auto const& s : { Spot{ "cm150a", 52, 22, 874 }, Spot{ "x2", 80, 16, 781 }, Spot{ "misex1", 84, 17, 700 } } )
  {
    auto const shown = display_efficiency( efficiency( s.area, s.cycles ) );
    pass = pass && shown == s.expected;
    detail += fmt::format( "{}{} {}", detail.empty() ? "" : ", ", s.name, shown );
  }
  return { pass, detail + " (expected 874, 781, 700)" };
}

Outcome statistics_regression()
{
  auto const simpler = load_baseline( fixtures::data_path( "baselines/baseline_simpler.json" ) );
  auto const published = rows_from_baseline( load_baseline( fixtures::data_path( "baselines/published_saga.json" ) ) );
  auto const s = summarize( published, simpler );

  struct Target
  {
    char const* label;
    double got, want;
  };
  std::vector<Target> const targets{
      { "cycles arithmetic", s.cycles.arithmetic_mean, -25.5 },
      { "area arithmetic", s.area.arithmetic_mean, 33.6 },
      { "efficiency arithmetic", s.efficiency.arithmetic_mean, 38.3 },
      { "cycles geometric", s.cycles.geometric_mean.value_or( NAN ), -29.5 },
      { "area geometric", s.area.geometric_mean.value_or( NAN ), 32.3 },
      { "efficiency geometric", s.efficiency.geometric_mean.value_or( NAN ), 27.5 },
  };
  bool pass = true;
  std::string detail;
  for ( auto const& t : targets )
  {
    auto const ok = std::abs( t.got - t.want ) <= mean_tolerance_pp;
    pass = pass && ok;
    detail += fmt::format( "{} {:.2f} vs {:.1f}{}; ", t.label, t.got, t.want, ok ? "" : " [out of tolerance]" );
  }
  auto const p_ok = std::abs( s.p_value - p_value_target ) <= p_value_tolerance;
  pass = pass && p_ok;
  detail += fmt::format( "p {:.5f} vs {:.3f}{}", s.p_value, p_value_target, p_ok ? "" : " [out of tolerance]" );
  return { pass, detail };
}

Outcome epsilon_monotonicity()
{
  std::vector<std::size_t> const eps{ 50, 500, 5000 };
  GaConfig cfg;
  cfg.population_size = 100;
  cfg.master_seed = 5;

  bool pass = true;
  std::string detail;
  for ( auto const* name : { "figure1", "full_adder", "eq4", "adder4" } )
  {
    auto const dag = build_dag( fixtures::circuit( name ) );
    auto const runs = optimize_nested( dag, cfg, eps );
    auto const ok = runs[0].best_result.area >= runs[1].best_result.area && runs[1].best_result.area >= runs[2].best_result.area;
    pass = pass && ok;
    detail += fmt::format( "{} {}/{}/{}; ", name, runs[0].best_result.area, runs[1].best_result.area, runs[2].best_result.area );
  }

  cfg.population_size = 50;
  double sum_small = 0, sum_large = 0;
  std::size_t const corpus = 20;
  for ( std::uint64_t i = 0; i < corpus; ++i )
  {
    auto const dag = build_dag( random_circuit( { 2, 5, 8, 30, 0.3, 0.1 }, 500 + i ) );
    auto const runs = optimize_nested( dag, cfg, eps );
    pass = pass && runs[0].best_result.area >= runs[1].best_result.area && runs[1].best_result.area >= runs[2].best_result.area;
    sum_small += static_cast<double>( runs[0].best_result.area );
    sum_large += static_cast<double>( runs[2].best_result.area );
  }
  pass = pass && sum_large <= sum_small;
  detail += fmt::format( "random corpus mean area {:.2f} at eps=50, {:.2f} at eps=5000", sum_small / corpus, sum_large / corpus );
  return { pass, detail };
}

Outcome determinism()
{
  auto const dag = build_dag( fixtures::circuit( "adder4" ) );
  GaConfig cfg;
  cfg.master_seed = 20260;
  auto const first = to_json( dag, optimize( dag, cfg ) ).dump();
  auto const second = to_json( dag, optimize( dag, cfg ) ).dump();
  cfg.threads = 4;
  auto const threaded = to_json( dag, optimize( dag, cfg ) ).dump();
  auto const pass = first == second && first == threaded;
  return { pass, fmt::format( "GaRun JSON {} bytes; repeat {}, 4 threads {}", first.size(), first == second ? "identical" : "differs",
                              first == threaded ? "identical" : "differs" ) };
}

/* direct gate-level evaluation of a parsed netlist */
std::vector<std::vector<bool>> netlist_truth_table( Netlist const& n )
{
  std::vector<std::vector<bool>> table;
  for ( std::uint64_t a = 0; a < ( std::uint64_t{ 1 } << n.inputs.size() ); ++a )
  {
    std::map<std::string, bool> value;
    for ( std::size_t i = 0; i < n.inputs.size(); ++i )
      value[n.inputs[i]] = ( a >> i ) & 1u;
    std::vector<bool> ready( n.gates.size(), false );
    for ( std::size_t done = 0; done < n.gates.size(); )
    {
      for ( std::size_t g = 0; g < n.gates.size(); ++g )
      {
        auto const& gate = n.gates[g];
        if ( ready[g] || !std::all_of( gate.operands.begin(), gate.operands.end(), [&]( auto const& o ) { return value.count( o ); } ) )
          continue;
        bool any = false;
        for ( auto const& o : gate.operands )
          any = any || value[o];
        value[gate.output] = !any;
        ready[g] = true;
        ++done;
      }
    }
    std::vector<bool> out;
    for ( auto const& o : n.outputs )
      out.push_back( value.at( o ) );
    table.push_back( out );
  }
  return table;
}

Outcome parser_corpus()
{
  auto const files = fixtures::circuit_files();
  std::size_t ok = 0;
  std::string failures;
  for ( auto const& file : files )
  {
    auto const text = fixtures::read_file( file.string() );
    auto const parsed = parse_blif( text );
    auto const reparsed = parse_blif( write_blif( parsed ) );
    auto const expected = ref::BlifInterpreter( text ).truth_table();
    auto const good = parsed.inputs.size() <= 16 && reparsed == parsed && netlist_truth_table( parsed ) == expected &&
                      ref::BlifInterpreter( write_blif( parsed ) ).truth_table() == expected;
    ok += good;
    if ( !good )
      failures += " " + file.filename().string();
  }
  auto const pass = ok == files.size() && !files.empty();
  return { pass, fmt::format( "{}/{} fixtures round-trip and match the interpreter{}", ok, files.size(),
                              failures.empty() ? "" : ", failing:" + failures ) };
}

struct Criterion
{
  char const* title;
  std::function<Outcome()> run;
};

} // namespace

int main( int argc, char** argv )
{
  std::vector<Criterion> const criteria{
      { "oracle equivalence", oracle_equivalence },     { "operator closure", operator_closure },
      { "fitness exactness", fitness_exactness },       { "order-dependent footprint", figure_one },
      { "efficiency arithmetic", efficiency_arithmetic }, { "statistics regression", statistics_regression },
      { "epsilon monotonicity", epsilon_monotonicity }, { "determinism", determinism },
      { "parser corpus", parser_corpus },
  };

  std::vector<std::size_t> selected;
  for ( int i = 1; i < argc; ++i )
  {
    std::string const arg = argv[i];
    if ( arg == "--criterion" && i + 1 < argc )
    {
      auto const k = std::strtoul( argv[++i], nullptr, 10 );
      if ( k < 1 || k > criteria.size() )
      {
        std::cerr << "criterion must be 1.." << criteria.size() << '\n';
        return 2;
      }
      selected.push_back( k - 1 );
    }
    else
    {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if ( selected.empty() )
  {
    for ( std::size_t k = 0; k < criteria.size(); ++k )
      selected.push_back( k );
  }

  bool all = true;
  for ( auto const k : selected )
  {
    Outcome outcome{ false, "" };
    try
    {
      outcome = criteria[k].run();
    }
    catch ( std::exception const& e )
    {
      outcome = { false, std::string( "exception: " ) + e.what() };
    }
    all = all && outcome.pass;
    std::cout << fmt::format( "criterion {} {}: {} ({})", k + 1, outcome.pass ? "PASS" : "FAIL", criteria[k].title, outcome.detail )
              << std::endl;
  }
  return all ? 0 : 1;
}
