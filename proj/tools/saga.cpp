#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "saga/bench.hpp"
#include "saga/dag.hpp"
#include "saga/ga.hpp"
#include "saga/netlist.hpp"
#include "saga/oracle.hpp"
#include "saga/simulator.hpp"

namespace fs = std::filesystem;

namespace
{

struct GaOptions
{
  std::optional<std::size_t> epsilon, pop, max_gens, threads;
  std::optional<double> mut_rate;
  std::optional<std::uint64_t> seed;
  std::string config_path;

  void add_to( CLI::App* cmd, bool with_epsilon )
  {
    if ( with_epsilon )
      cmd->add_option( "--epsilon", epsilon, "Stall generations before stopping" );
    cmd->add_option( "--pop", pop, "Population size (even, >= 2)" );
    cmd->add_option( "--mut-rate", mut_rate, "Per-individual mutation probability" );
    cmd->add_option( "--seed", seed, "Master seed" );
    cmd->add_option( "--max-gens", max_gens, "Hard generation cap" );
    cmd->add_option( "--threads", threads, "Fitness evaluation workers" );
    cmd->add_option( "--config", config_path, "GA config JSON; flags override its values" );
  }

  saga::GaConfig resolve() const
  {
    saga::GaConfig cfg;
    if ( !config_path.empty() )
    {
      std::ifstream in( config_path );
      if ( !in )
        throw saga::InputError( fmt::format( "cannot open config '{}'", config_path ) );
      auto const j = nlohmann::json::parse( in, nullptr, false );
      if ( j.is_discarded() )
        throw saga::ConfigError( fmt::format( "config '{}' is not valid JSON", config_path ) );
      cfg = saga::ga_config_from_json( j, cfg );
    }
    if ( epsilon )
      cfg.epsilon = *epsilon;
    if ( pop )
      cfg.population_size = *pop;
    if ( mut_rate )
      cfg.mutation_rate = *mut_rate;
    if ( seed )
      cfg.master_seed = *seed;
    if ( max_gens )
      cfg.max_generations = *max_gens;
    if ( threads )
      cfg.threads = *threads;
    cfg.validate();
    return cfg;
  }
};

nlohmann::json read_json_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw saga::InputError( fmt::format( "cannot open '{}'", path ) );
  auto j = nlohmann::json::parse( in, nullptr, false );
  if ( j.is_discarded() )
    throw saga::InputError( fmt::format( "'{}' is not valid JSON", path ) );
  return j;
}

void write_file( std::string const& path, std::string const& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw saga::InputError( fmt::format( "cannot write '{}'", path ) );
  out << text;
}

std::vector<std::size_t> parse_epsilons( std::string const& list )
{
  std::vector<std::size_t> out;
  std::stringstream ss( list );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try
    {
      v = std::stoull( item, &pos );
    }
    catch ( std::exception const& )
    {
      pos = 0;
    }
    if ( pos == 0 || pos != item.size() || v == 0 )
      throw saga::ConfigError( fmt::format( "bad epsilon '{}' in list '{}'", item, list ) );
    out.push_back( static_cast<std::size_t>( v ) );
  }
  if ( out.empty() )
    throw saga::ConfigError( "epsilon list must be nonempty" );
  return out;
}

int run_bench( std::string const& dir, std::string const& epsilon_list, std::string const& baseline_path,
               std::string const& format_name, bool independent, saga::GaConfig const& cfg )
{
  auto const format = saga::parse_report_format( format_name );
  auto const epsilons = parse_epsilons( epsilon_list );
  if ( !fs::is_directory( dir ) )
    throw saga::InputError( fmt::format( "'{}' is not a directory", dir ) );

  std::vector<fs::path> files;
  for ( auto const& entry : fs::directory_iterator( dir ) )
  {
    auto const ext = entry.path().extension();
    if ( entry.is_regular_file() && ( ext == ".blif" || ext == ".json" ) )
      files.push_back( entry.path() );
  }
  std::sort( files.begin(), files.end() );

  std::vector<saga::BenchRow> rows;
  for ( auto const& file : files )
  {
    std::vector<saga::BenchRow> part;
    try
    {
      auto netlist = saga::load_netlist( file.string() );
      if ( netlist.name.empty() )
        netlist.name = file.stem().string();
      part = saga::run_suite( std::span( &netlist, 1 ), epsilons, cfg,
                              independent ? saga::SweepMode::Independent : saga::SweepMode::Nested );
    }
    catch ( saga::InputError const& e )
    {
      part = saga::error_rows( file.stem().string(), epsilons, e.what() );
    }
    rows.insert( rows.end(), part.begin(), part.end() );
  }

  std::optional<saga::SummaryStats> stats;
  if ( !baseline_path.empty() )
  {
    auto const baseline = saga::load_baseline( baseline_path );
    saga::apply_baseline( rows, baseline );
    stats = saga::summarize( rows, baseline );
  }
  std::cout << saga::emit_report( rows, stats, format );
  return 0;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Memory-footprint minimization of NOR/inverter execution sequences" };
  app.require_subcommand( 1 );

  GaOptions ga_opts;
  std::string netlist_path, sequence_path, out_path, history_path;

  auto* opt = app.add_subcommand( "optimize", "Evolve a low-footprint execution sequence" );
  opt->add_option( "netlist", netlist_path, "BLIF or JSON netlist" )->required();
  opt->add_option( "--out", out_path, "Write the best sequence as JSON" );
  opt->add_option( "--history-csv", history_path, "Write per-generation best/median area" );
  ga_opts.add_to( opt, true );

  auto* eval = app.add_subcommand( "evaluate", "Footprint of a given sequence" );
  eval->add_option( "netlist", netlist_path, "BLIF or JSON netlist" )->required();
  eval->add_option( "sequence", sequence_path, "JSON array of gate output names" )->required();

  std::size_t limit = saga::default_oracle_limit;
  bool plain = false;
  auto* orc = app.add_subcommand( "oracle", "Exhaustive minimum footprint over all orders" );
  orc->add_option( "netlist", netlist_path, "BLIF or JSON netlist" )->required();
  orc->add_option( "--limit", limit, "Refuse circuits with more gates than this" );
  orc->add_flag( "--plain", plain, "Use the unmemoized enumerator" );

  std::string bench_dir, epsilon_list = "50,500,5000", baseline_path, format_name = "md";
  bool independent = false;
  auto* bench = app.add_subcommand( "bench", "Run the optimizer over a directory of netlists" );
  bench->add_option( "dir", bench_dir, "Directory of .blif/.json netlists" )->required();
  bench->add_option( "--epsilons", epsilon_list, "Comma-separated stall budgets" );
  bench->add_option( "--baseline", baseline_path, "Reference table JSON for improvement columns" );
  bench->add_option( "--format", format_name, "csv, json or md" );
  bench->add_flag( "--independent", independent, "Fresh run per epsilon instead of one checkpointed run" );
  ga_opts.add_to( bench, false );

  CLI11_PARSE( app, argc, argv );

  try
  {
    if ( *opt )
    {
      auto const dag = saga::build_dag( saga::load_netlist( netlist_path ) );
      auto const run = saga::optimize( dag, ga_opts.resolve() );
      std::cout << saga::to_json( dag, run ).dump( 2 ) << '\n';
      if ( !out_path.empty() )
        write_file( out_path, saga::sequence_to_json( dag, run.best_sequence ).dump() + "\n" );
      if ( !history_path.empty() )
        write_file( history_path, saga::history_csv( run ) );
    }
    else if ( *eval )
    {
      auto const dag = saga::build_dag( saga::load_netlist( netlist_path ) );
      auto const seq = saga::sequence_from_json( dag, read_json_file( sequence_path ) );
      std::cout << saga::to_json( saga::footprint( dag, seq ) ).dump() << '\n';
    }
    else if ( *orc )
    {
      auto const dag = saga::build_dag( saga::load_netlist( netlist_path ) );
      auto const result = plain ? saga::enumerate_plain( dag, limit ) : saga::enumerate_min( dag, limit );
      std::cout << saga::to_json( dag, result ).dump( 2 ) << '\n';
    }
    else if ( *bench )
    {
      return run_bench( bench_dir, epsilon_list, baseline_path, format_name, independent, ga_opts.resolve() );
    }
  }
  catch ( saga::InvariantViolation const& e )
  {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  catch ( saga::InputError const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
