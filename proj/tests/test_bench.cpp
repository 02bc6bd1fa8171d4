#include <doctest.h>

#include <fixtures.hpp>

#include <saga/bench.hpp>
#include <saga/random_circuit.hpp>

using namespace saga;

namespace
{

Baseline two_row_baseline()
{
  return baseline_from_json( nlohmann::json::parse( R"({"description":"t","rows":[
    {"benchmark":"a","cycles":100,"area":20,"efficiency":500},
    {"benchmark":"b","cycles":50,"area":10}]})" ) );
}

BenchRow row( std::string name, std::size_t eps, std::size_t cycles, std::size_t area )
{
  BenchRow r;
  r.benchmark = std::move( name );
  r.epsilon = eps;
  r.cycles = cycles;
  r.area = area;
  r.efficiency = efficiency( area, cycles );
  return r;
}

std::size_t count_lines( std::string const& s, std::string const& eol = "\n" )
{
  std::size_t n = 0;
  for ( auto pos = s.find( eol ); pos != std::string::npos; pos = s.find( eol, pos + eol.size() ) )
    ++n;
  return n;
}

} // namespace

TEST_CASE( "baseline loading" )
{
  auto const b = two_row_baseline();
  REQUIRE( b.entries.size() == 2 );
  CHECK( b.find( "a" )->efficiency == 500 );
  CHECK( b.find( "b" )->efficiency == doctest::Approx( 2000.0 ) );
  CHECK( b.find( "c" ) == nullptr );
  CHECK_THROWS_AS( baseline_from_json( nlohmann::json::object() ), InputError );
  CHECK( load_baseline( fixtures::data_path( "baselines/baseline_simpler.json" ) ).entries.size() == 10 );
}

TEST_CASE( "improvement arithmetic" )
{
  auto const base = *two_row_baseline().find( "a" );
  auto const imp = improvement_over( base, 120, 15, efficiency( 15, 120 ) );
  CHECK( imp.cycles_pct == doctest::Approx( -20.0 ) );
  CHECK( imp.area_pct == doctest::Approx( 25.0 ) );
  CHECK( imp.efficiency_pct == doctest::Approx( ( 1e6 / 1800.0 - 500.0 ) / 5.0 ) );
}

TEST_CASE( "describe and t-test" )
{
  std::vector<double> const zeros( 5, 0.0 );
  auto const z = describe( zeros );
  CHECK( z.arithmetic_mean == 0.0 );
  CHECK( *z.geometric_mean == doctest::Approx( 0.0 ) );
  CHECK( one_tailed_t_test( zeros ).second >= 0.05 );

  std::vector<double> const x{ 1, 2, 3, 4 };
  auto const [t, p] = one_tailed_t_test( x );
  CHECK( t == doctest::Approx( 3.872983346207417 ) );
  CHECK( p == doctest::Approx( 0.015233145831085489 ).epsilon( 1e-9 ) );

  std::vector<double> ten( 10 );
  for ( std::size_t i = 0; i < 10; ++i )
    ten[i] = static_cast<double>( i );
  auto const d = describe( ten );
  auto const half = 2.2621571628540993 * d.std_dev / std::sqrt( 10.0 );
  CHECK( d.ci_low == doctest::Approx( 4.5 - half ) );
  CHECK( d.ci_high == doctest::Approx( 4.5 + half ) );

  /* geometric mean factor falls below the arithmetic one for non-constant positive factors */
  std::vector<double> const mixed{ -20.0, 10.0, 50.0 };
  auto const m = describe( mixed );
  CHECK( *m.geometric_mean < m.arithmetic_mean );
  CHECK_FALSE( describe( std::vector<double>{ -100.0, 5.0 } ).geometric_mean.has_value() );
}

TEST_CASE( "summarize uses the last epsilon and skips errors" )
{
  std::vector<BenchRow> rows{ row( "a", 50, 100, 25 ), row( "a", 500, 100, 20 ), row( "b", 50, 50, 10 ) };
  rows.push_back( error_rows( "c", std::vector<std::size_t>{ 50 }, "broken" ).front() );
  auto const s = summarize( rows, two_row_baseline() );
  CHECK( s.n == 2 );
  CHECK( s.area.arithmetic_mean == doctest::Approx( 0.0 ) );
  CHECK( s.p_value >= 0.05 );
  CHECK_FALSE( s.reject_null );

  rows.push_back( row( "zzz", 50, 1, 1 ) );
  CHECK_THROWS_AS( summarize( rows, two_row_baseline() ), MissingBaseline );
}

TEST_CASE( "run_suite rows" )
{
  std::vector<Netlist> circuits{ fixtures::circuit( "figure1" ), random_circuit( {}, 3 ) };
  circuits.push_back( load_netlist( std::string( SAGA_DATA_DIR ) + "/../tests/data/cyclic.blif" ) );
  GaConfig cfg;
  cfg.population_size = 20;
  std::vector<std::size_t> const eps{ 50, 5, 20 };
  auto const rows = run_suite( circuits, eps, cfg );
  REQUIRE( rows.size() == 9 );
  CHECK( rows[0].benchmark == "figure1" );
  CHECK( rows[0].epsilon == 5 );
  CHECK( rows[2].epsilon == 50 );
  CHECK( rows[0].area == 3 );
  CHECK( rows[0].baseline_area == 4 );
  CHECK( !rows[0].delta_eff_pct );
  CHECK( *rows[1].delta_eff_pct == doctest::Approx( 0.0 ) );
  for ( std::size_t i = 3; i < 6; ++i )
  {
    CHECK( rows[i].efficiency == doctest::Approx( efficiency( rows[i].area, rows[i].cycles ) ) );
    if ( i > 3 )
      CHECK( rows[i].area <= rows[i - 1].area );
  }
  for ( std::size_t i = 6; i < 9; ++i )
    CHECK( rows[i].error.has_value() );

  auto const independent = run_suite( circuits, eps, cfg, SweepMode::Independent );
  for ( std::size_t i = 0; i < 6; ++i )
    CHECK( independent[i].area == rows[i].area );
}

TEST_CASE( "report formats" )
{
  std::vector<BenchRow> one{ row( "a", 50, 52, 22 ) };
  auto const j = nlohmann::json::parse( emit_report( one, std::nullopt, ReportFormat::Json ) );
  REQUIRE( j.is_array() );
  REQUIRE( j.size() == 1 );
  for ( auto const* key : { "benchmark", "epsilon", "cycles", "area", "efficiency", "baseline_area", "generations_run",
                            "delta_eff_pct", "improvement_pct", "error" } )
    CHECK( j[0].contains( key ) );

  std::vector<BenchRow> two{ row( "plain", 50, 10, 5 ), row( "has,comma \"q\"", 50, 10, 5 ) };
  auto const csv = emit_report( two, std::nullopt, ReportFormat::Csv );
  CHECK( count_lines( csv, "\r\n" ) == 3 );
  CHECK( csv.find( "\"has,comma \"\"q\"\"\"" ) != std::string::npos );

  std::vector<BenchRow> ten;
  for ( std::size_t i = 0; i < 10; ++i )
    ten.push_back( row( "c" + std::to_string( i ), 50, 52, 22 ) );
  auto const md = emit_report( ten, std::nullopt, ReportFormat::Markdown );
  CHECK( count_lines( md ) == 12 );
  CHECK( md.find( "| c0 | 50 | 52 | 22 | 874 |" ) != std::string::npos );

  auto rows = ten;
  Baseline b;
  for ( auto const& r : ten )
    b.entries.push_back( { r.benchmark, 60, 30, efficiency( 30, 60 ), std::nullopt } );
  apply_baseline( rows, b );
  auto const stats = summarize( rows, b );
  auto const with_stats = nlohmann::json::parse( emit_report( rows, stats, ReportFormat::Json ) );
  CHECK( with_stats["rows"].size() == 10 );
  CHECK( with_stats["summary"]["n"] == 10 );
  CHECK( emit_report( rows, stats, ReportFormat::Markdown ) == emit_report( rows, stats, ReportFormat::Markdown ) );
  CHECK_THROWS_AS( parse_report_format( "xml" ), InputError );
}
