#pragma once

/*!
  \file bench.hpp
  \brief Benchmark suite runner, summary statistics and report emission

  Percentage changes follow the "positive is better" convention: cycles and
  area improve when they shrink, efficiency improves when it grows.
*/

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ga.hpp"
#include "netlist.hpp"

namespace saga
{

class MissingBaseline : public InputError
{
public:
  explicit MissingBaseline( std::string const& benchmark );

  std::string const& benchmark() const noexcept { return benchmark_; }

private:
  std::string benchmark_;
};

/*! \brief One row of a reference table (e.g. transcribed prior-work numbers). */
struct BaselineEntry
{
  std::string benchmark;
  std::size_t cycles{ 0 };
  std::size_t area{ 0 };
  /* as published; recomputed from cycles and area when the source omits it */
  double efficiency{ 0.0 };
  std::optional<std::size_t> epsilon;
};

struct Baseline
{
  std::string description;
  std::vector<BaselineEntry> entries;

  BaselineEntry const* find( std::string const& benchmark ) const;
};

Baseline baseline_from_json( nlohmann::json const& j );
Baseline load_baseline( std::string const& path );

struct Improvement
{
  double cycles_pct{ 0.0 };
  double area_pct{ 0.0 };
  double efficiency_pct{ 0.0 };
};

struct BenchRow
{
  std::string benchmark;
  std::size_t epsilon{ 0 };
  std::size_t cycles{ 0 };
  std::size_t area{ 0 };
  double efficiency{ 0.0 };
  /* footprint of the breadth-first seed ordering */
  std::size_t baseline_area{ 0 };
  std::size_t generations_run{ 0 };
  /* efficiency change against the previous (smaller) epsilon of the same benchmark */
  std::optional<double> delta_eff_pct;
  std::optional<Improvement> improvement;
  std::optional<std::string> error;
};

enum class SweepMode
{
  Nested,
  Independent
};

/*! \brief One row per (circuit, epsilon), epsilons ascending within a circuit.
 *
 * Circuits that fail (e.g. combinational cycles) yield error rows; the
 * suite carries on with the rest.
 */
std::vector<BenchRow> run_suite( std::span<Netlist const> circuits, std::span<std::size_t const> epsilons, GaConfig const& cfg,
                                 SweepMode mode = SweepMode::Nested );

/*! \brief Error placeholder rows for a circuit that could not be loaded. */
std::vector<BenchRow> error_rows( std::string const& benchmark, std::span<std::size_t const> epsilons, std::string const& message );

/*! \brief Percentage change of (cycles, area, efficiency) against a reference row. */
Improvement improvement_over( BaselineEntry const& base, std::size_t cycles, std::size_t area, double efficiency );

/*! \brief Fills `improvement` for every row whose benchmark appears in the baseline. */
void apply_baseline( std::vector<BenchRow>& rows, Baseline const& baseline );

/*! \brief Turns reference entries into rows (efficiency recomputed from cycles and area). */
std::vector<BenchRow> rows_from_baseline( Baseline const& published );

struct MetricStats
{
  double arithmetic_mean{ 0.0 };
  /* undefined when some (1 + change) factor is not positive */
  std::optional<double> geometric_mean;
  double std_dev{ 0.0 };
  double ci_low{ 0.0 };
  double ci_high{ 0.0 };
};

struct SummaryStats
{
  std::size_t n{ 0 };
  MetricStats cycles;
  MetricStats area;
  MetricStats efficiency;
  /* one-tailed test of H1: mean efficiency change > 0 */
  double t_statistic{ 0.0 };
  double p_value{ 1.0 };
  double alpha{ 0.05 };
  bool reject_null{ false };
};

/*! \brief Statistics of a list of percentage changes (df = n - 1, t-based 95% interval). */
MetricStats describe( std::span<double const> changes_pct );

/*! \brief One-tailed one-sample t-test of mean > 0; returns (t, p). */
std::pair<double, double> one_tailed_t_test( std::span<double const> samples );

/*! \brief Summary over per-benchmark changes against `baseline`.
 *
 * Uses the largest-epsilon row of each benchmark and skips error rows.
 * Throws `MissingBaseline` for a benchmark absent from the baseline.
 */
SummaryStats summarize( std::span<BenchRow const> rows, Baseline const& baseline );

enum class ReportFormat
{
  Json,
  Csv,
  Markdown
};

ReportFormat parse_report_format( std::string const& name );

nlohmann::json to_json( BenchRow const& row );
nlohmann::json to_json( SummaryStats const& stats );

/*! \brief Deterministic report text. JSON is a row array, or `{rows, summary}` when stats are given. */
std::string emit_report( std::span<BenchRow const> rows, std::optional<SummaryStats> const& stats, ReportFormat format );

} // namespace saga
