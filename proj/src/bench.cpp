#include "saga/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

namespace saga
{

MissingBaseline::MissingBaseline( std::string const& benchmark )
    : InputError( fmt::format( "no baseline entry for benchmark '{}'", benchmark ) ), benchmark_( benchmark )
{
}

BaselineEntry const* Baseline::find( std::string const& benchmark ) const
{
  auto it = std::find_if( entries.begin(), entries.end(), [&]( auto const& e ) { return e.benchmark == benchmark; } );
  return it == entries.end() ? nullptr : &*it;
}

Baseline baseline_from_json( nlohmann::json const& j )
{
  if ( !j.is_object() || !j.contains( "rows" ) || !j["rows"].is_array() )
    throw InputError( "baseline JSON needs a 'rows' array" );
  auto const count = []( nlohmann::json const& v ) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; };
  Baseline baseline;
  baseline.description = j.value( "description", std::string{} );
  for ( auto const& row : j["rows"] )
  {
    if ( !row.is_object() || !row.contains( "benchmark" ) || !row["benchmark"].is_string() ||
         !row.contains( "cycles" ) || !count( row["cycles"] ) || !row.contains( "area" ) || !count( row["area"] ) )
      throw InputError( "baseline rows need 'benchmark', 'cycles' and 'area'" );
    BaselineEntry e;
    e.benchmark = row["benchmark"].get<std::string>();
    e.cycles = row["cycles"].get<std::size_t>();
    e.area = row["area"].get<std::size_t>();
    e.efficiency = row.contains( "efficiency" ) && row["efficiency"].is_number() ? row["efficiency"].get<double>()
                                                                                : saga::efficiency( e.area, e.cycles );
    if ( row.contains( "epsilon" ) && count( row["epsilon"] ) )
      e.epsilon = row["epsilon"].get<std::size_t>();
    baseline.entries.push_back( std::move( e ) );
  }
  return baseline;
}

Baseline load_baseline( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw InputError( fmt::format( "cannot open baseline '{}'", path ) );
  auto const j = nlohmann::json::parse( in, nullptr, false );
  if ( j.is_discarded() )
    throw InputError( fmt::format( "baseline '{}' is not valid JSON", path ) );
  return baseline_from_json( j );
}

std::vector<BenchRow> error_rows( std::string const& benchmark, std::span<std::size_t const> epsilons, std::string const& message )
{
  std::vector<std::size_t> sorted( epsilons.begin(), epsilons.end() );
  std::sort( sorted.begin(), sorted.end() );
  sorted.erase( std::unique( sorted.begin(), sorted.end() ), sorted.end() );
  std::vector<BenchRow> rows;
  for ( auto const eps : sorted )
  {
    BenchRow row;
    row.benchmark = benchmark;
    row.epsilon = eps;
    row.error = message;
    rows.push_back( std::move( row ) );
  }
  return rows;
}

std::vector<BenchRow> run_suite( std::span<Netlist const> circuits, std::span<std::size_t const> epsilons, GaConfig const& cfg,
                                 SweepMode mode )
{
  if ( epsilons.empty() )
    throw ConfigError( "epsilon list must be nonempty" );

  std::vector<BenchRow> rows;
  for ( auto const& netlist : circuits )
  {
    std::vector<GaRun> runs;
    std::vector<BenchRow> circuit_rows;
    try
    {
      auto const dag = build_dag( netlist );
      if ( mode == SweepMode::Nested )
        runs = optimize_nested( dag, cfg, epsilons );
      else
      {
        std::vector<std::size_t> sorted( epsilons.begin(), epsilons.end() );
        std::sort( sorted.begin(), sorted.end() );
        sorted.erase( std::unique( sorted.begin(), sorted.end() ), sorted.end() );
        for ( auto const eps : sorted )
        {
          auto c = cfg;
          c.epsilon = eps;
          runs.push_back( optimize( dag, c ) );
        }
      }
    }
    catch ( Error const& e )
    {
      auto failed = error_rows( netlist.name, epsilons, e.what() );
      rows.insert( rows.end(), failed.begin(), failed.end() );
      continue;
    }

    std::optional<double> previous;
    for ( auto const& run : runs )
    {
      BenchRow row;
      row.benchmark = netlist.name;
      row.epsilon = run.config.epsilon;
      row.cycles = run.best_result.cycles;
      row.area = run.best_result.area;
      row.efficiency = run.best_result.efficiency;
      row.baseline_area = run.seed_result.area;
      row.generations_run = run.generations_run;
      if ( previous && *previous > 0 )
        row.delta_eff_pct = ( row.efficiency - *previous ) / *previous * 100.0;
      previous = row.efficiency;
      rows.push_back( std::move( row ) );
    }
  }
  return rows;
}

Improvement improvement_over( BaselineEntry const& base, std::size_t cycles, std::size_t area, double efficiency )
{
  auto const reduction = []( double ref, double ours ) { return ref > 0 ? ( ref - ours ) / ref * 100.0 : 0.0; };
  Improvement imp;
  imp.cycles_pct = reduction( static_cast<double>( base.cycles ), static_cast<double>( cycles ) );
  imp.area_pct = reduction( static_cast<double>( base.area ), static_cast<double>( area ) );
  imp.efficiency_pct = base.efficiency > 0 ? ( efficiency - base.efficiency ) / base.efficiency * 100.0 : 0.0;
  return imp;
}

void apply_baseline( std::vector<BenchRow>& rows, Baseline const& baseline )
{
  for ( auto& row : rows )
  {
    if ( row.error )
      continue;
    if ( auto const* base = baseline.find( row.benchmark ) )
      row.improvement = improvement_over( *base, row.cycles, row.area, row.efficiency );
  }
}

std::vector<BenchRow> rows_from_baseline( Baseline const& published )
{
  std::vector<BenchRow> rows;
  for ( auto const& e : published.entries )
  {
    BenchRow row;
    row.benchmark = e.benchmark;
    row.epsilon = e.epsilon.value_or( 0 );
    row.cycles = e.cycles;
    row.area = e.area;
    row.efficiency = efficiency( e.area, e.cycles );
    rows.push_back( std::move( row ) );
  }
  return rows;
}

MetricStats describe( std::span<double const> changes_pct )
{
  MetricStats s;
  auto const n = changes_pct.size();
  if ( n == 0 )
    return s;

  double sum = 0.0;
  double log_sum = 0.0;
  bool positive = true;
  for ( auto const c : changes_pct )
  {
    sum += c;
    auto const factor = 1.0 + c / 100.0;
    positive = positive && factor > 0.0;
    log_sum += positive ? std::log( factor ) : 0.0;
  }
  s.arithmetic_mean = sum / static_cast<double>( n );
  if ( positive )
    s.geometric_mean = ( std::exp( log_sum / static_cast<double>( n ) ) - 1.0 ) * 100.0;

  double ss = 0.0;
  for ( auto const c : changes_pct )
    ss += ( c - s.arithmetic_mean ) * ( c - s.arithmetic_mean );
  s.std_dev = n > 1 ? std::sqrt( ss / static_cast<double>( n - 1 ) ) : 0.0;

  s.ci_low = s.ci_high = s.arithmetic_mean;
  if ( n > 1 )
  {
    boost::math::students_t dist( static_cast<double>( n - 1 ) );
    auto const half = boost::math::quantile( dist, 0.975 ) * s.std_dev / std::sqrt( static_cast<double>( n ) );
    s.ci_low -= half;
    s.ci_high += half;
  }
  return s;
}

std::pair<double, double> one_tailed_t_test( std::span<double const> samples )
{
  auto const n = samples.size();
  if ( n < 2 )
    return { 0.0, 1.0 };
  auto const d = describe( samples );
  if ( d.std_dev == 0.0 )
  {
    if ( d.arithmetic_mean > 0.0 )
      return { std::numeric_limits<double>::infinity(), 0.0 };
    if ( d.arithmetic_mean < 0.0 )
      return { -std::numeric_limits<double>::infinity(), 1.0 };
    return { 0.0, 0.5 };
  }
  auto const t = d.arithmetic_mean / ( d.std_dev / std::sqrt( static_cast<double>( n ) ) );
  boost::math::students_t dist( static_cast<double>( n - 1 ) );
  return { t, boost::math::cdf( boost::math::complement( dist, t ) ) };
}

SummaryStats summarize( std::span<BenchRow const> rows, Baseline const& baseline )
{
  /* largest epsilon per benchmark, in first-appearance order */
  std::vector<BenchRow const*> chosen;
  for ( auto const& row : rows )
  {
    if ( row.error )
      continue;
    auto it = std::find_if( chosen.begin(), chosen.end(), [&]( auto const* r ) { return r->benchmark == row.benchmark; } );
    if ( it == chosen.end() )
      chosen.push_back( &row );
    else if ( row.epsilon >= ( *it )->epsilon )
      *it = &row;
  }

  std::vector<double> cycles, area, eff;
  for ( auto const* row : chosen )
  {
    auto const* base = baseline.find( row->benchmark );
    if ( !base )
      throw MissingBaseline( row->benchmark );
    auto const imp = improvement_over( *base, row->cycles, row->area, row->efficiency );
    cycles.push_back( imp.cycles_pct );
    area.push_back( imp.area_pct );
    eff.push_back( imp.efficiency_pct );
  }

  SummaryStats stats;
  stats.n = chosen.size();
  stats.cycles = describe( cycles );
  stats.area = describe( area );
  stats.efficiency = describe( eff );
  std::tie( stats.t_statistic, stats.p_value ) = one_tailed_t_test( eff );
  stats.reject_null = stats.p_value < stats.alpha;
  return stats;
}

ReportFormat parse_report_format( std::string const& name )
{
  if ( name == "json" )
    return ReportFormat::Json;
  if ( name == "csv" )
    return ReportFormat::Csv;
  if ( name == "md" || name == "markdown" )
    return ReportFormat::Markdown;
  throw InputError( fmt::format( "unknown report format '{}' (expected csv, json or md)", name ) );
}

namespace
{

nlohmann::json optional_number( std::optional<double> const& v )
{
  return v ? nlohmann::json( *v ) : nlohmann::json( nullptr );
}

nlohmann::json to_json( MetricStats const& m )
{
  return { { "arithmetic_mean", m.arithmetic_mean },
           { "geometric_mean", optional_number( m.geometric_mean ) },
           { "std_dev", m.std_dev },
           { "ci95", { m.ci_low, m.ci_high } } };
}

/* RFC 4180: quote fields holding separators, quotes or line breaks */
std::string csv_field( std::string const& s )
{
  if ( s.find_first_of( ",\"\r\n" ) == std::string::npos )
    return s;
  std::string out = "\"";
  for ( auto const c : s )
  {
    if ( c == '"' )
      out += '"';
    out += c;
  }
  return out + '"';
}

std::string fixed( std::optional<double> v, int digits )
{
  return v ? fmt::format( "{:.{}f}", *v, digits ) : std::string{};
}

std::string percent( std::optional<double> v )
{
  return v ? fmt::format( "{:.2f}%", *v ) : std::string( "n/a" );
}

std::string markdown_cell( std::string s )
{
  std::string out;
  for ( auto const c : s )
  {
    if ( c == '|' )
      out += "\\|";
    else if ( c == '\n' || c == '\r' )
      out += ' ';
    else
      out += c;
  }
  return out;
}

std::string interval( MetricStats const& m )
{
  return fmt::format( "({:.2f}, {:.2f})", m.ci_low, m.ci_high );
}

} // namespace

nlohmann::json to_json( BenchRow const& row )
{
  nlohmann::json j = { { "benchmark", row.benchmark },
                       { "epsilon", row.epsilon },
                       { "cycles", row.cycles },
                       { "area", row.area },
                       { "efficiency", row.efficiency },
                       { "baseline_area", row.baseline_area },
                       { "generations_run", row.generations_run },
                       { "delta_eff_pct", optional_number( row.delta_eff_pct ) } };
  if ( row.improvement )
    j["improvement_pct"] = { { "cycles", row.improvement->cycles_pct },
                             { "area", row.improvement->area_pct },
                             { "efficiency", row.improvement->efficiency_pct } };
  else
    j["improvement_pct"] = nullptr;
  j["error"] = row.error ? nlohmann::json( *row.error ) : nlohmann::json( nullptr );
  return j;
}

nlohmann::json to_json( SummaryStats const& stats )
{
  return { { "n", stats.n },
           { "cycles", to_json( stats.cycles ) },
           { "area", to_json( stats.area ) },
           { "efficiency", to_json( stats.efficiency ) },
           { "t_statistic", stats.t_statistic },
           { "p_value", stats.p_value },
           { "alpha", stats.alpha },
           { "reject_null", stats.reject_null } };
}

std::string emit_report( std::span<BenchRow const> rows, std::optional<SummaryStats> const& stats, ReportFormat format )
{
  std::ostringstream os;
  switch ( format )
  {
  case ReportFormat::Json:
  {
    auto array = nlohmann::json::array();
    for ( auto const& row : rows )
      array.push_back( to_json( row ) );
    if ( stats )
      os << nlohmann::json{ { "rows", array }, { "summary", to_json( *stats ) } }.dump( 2 ) << '\n';
    else
      os << array.dump( 2 ) << '\n';
    break;
  }

  case ReportFormat::Csv:
  {
    os << "benchmark,epsilon,cycles,area,efficiency,baseline_area,generations_run,delta_eff_pct,"
          "cycles_improvement_pct,area_improvement_pct,efficiency_improvement_pct,error\r\n";
    for ( auto const& row : rows )
    {
      auto const imp = [&]( double Improvement::*field ) {
        return row.improvement ? std::optional<double>( ( *row.improvement ).*field ) : std::nullopt;
      };
      os << fmt::format( "{},{},{},{},{},{},{},{},{},{},{},{}\r\n", csv_field( row.benchmark ), row.epsilon, row.cycles, row.area,
                         fixed( row.efficiency, 4 ), row.baseline_area, row.generations_run, fixed( row.delta_eff_pct, 4 ),
                         fixed( imp( &Improvement::cycles_pct ), 4 ), fixed( imp( &Improvement::area_pct ), 4 ),
                         fixed( imp( &Improvement::efficiency_pct ), 4 ), csv_field( row.error.value_or( "" ) ) );
    }
    break;
  }

  case ReportFormat::Markdown:
  {
    os << "| Benchmark | ε | Cycles | Area | Efficiency | Seed Area | Δ_eff | Cycles Δ | Area Δ | Efficiency Δ |\n";
    os << "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
    for ( auto const& row : rows )
    {
      if ( row.error )
      {
        os << fmt::format( "| {} | {} | error: {} | n/a | n/a | n/a | n/a | n/a | n/a | n/a |\n", markdown_cell( row.benchmark ),
                           row.epsilon, markdown_cell( *row.error ) );
        continue;
      }
      auto const imp = [&]( double Improvement::*field ) {
        return row.improvement ? std::optional<double>( ( *row.improvement ).*field ) : std::nullopt;
      };
      os << fmt::format( "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n", markdown_cell( row.benchmark ), row.epsilon,
                         row.cycles, row.area, display_efficiency( row.efficiency ), row.baseline_area, percent( row.delta_eff_pct ),
                         percent( imp( &Improvement::cycles_pct ) ), percent( imp( &Improvement::area_pct ) ),
                         percent( imp( &Improvement::efficiency_pct ) ) );
    }
    if ( stats )
    {
      auto const& s = *stats;
      os << "\n| Statistic | Cycles | Area | Efficiency |\n|---|---:|---:|---:|\n";
      os << fmt::format( "| Arithmetic Mean | {} | {} | {} |\n", percent( s.cycles.arithmetic_mean ), percent( s.area.arithmetic_mean ),
                         percent( s.efficiency.arithmetic_mean ) );
      os << fmt::format( "| Geometric Mean | {} | {} | {} |\n", percent( s.cycles.geometric_mean ), percent( s.area.geometric_mean ),
                         percent( s.efficiency.geometric_mean ) );
      os << fmt::format( "| Standard Deviation | {} | {} | {} |\n", percent( s.cycles.std_dev ), percent( s.area.std_dev ),
                         percent( s.efficiency.std_dev ) );
      os << fmt::format( "| 95% Confidence | {} | {} | {} |\n", interval( s.cycles ), interval( s.area ), interval( s.efficiency ) );
      os << fmt::format( "\nOne-tailed t-test on efficiency change (n = {}): t = {:.4f}, p = {:.5f}, alpha = {}; H0 {}.\n", s.n,
                         s.t_statistic, s.p_value, s.alpha, s.reject_null ? "rejected" : "not rejected" );
    }
    break;
  }
  }
  return os.str();
}

} // namespace saga
