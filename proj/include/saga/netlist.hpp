#pragma once

/*!
  \file netlist.hpp
  \brief Gate-level NOR/inverter netlists and the BLIF subset that describes them

  A netlist is restricted to the MAGIC-mappable library: inverters and
  2-input NOR gates. Files are read from a structural BLIF subset
  (`.model`, `.inputs`, `.outputs`, single-output `.names`, `.end`) or from
  a JSON mirror of the same structure.
*/

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace saga
{

enum class GateKind : std::uint8_t
{
  Inv,
  Nor2
};

std::string_view to_string( GateKind kind );

/*! \brief Number of operands a gate of the given kind reads. */
constexpr std::size_t arity( GateKind kind )
{
  return kind == GateKind::Inv ? 1u : 2u;
}

struct Gate
{
  GateKind kind{ GateKind::Inv };
  std::vector<std::string> operands;
  std::string output;

  /* 1-based source line of the `.names` directive, 0 when not parsed from text */
  std::size_t line{ 0 };

  bool operator==( Gate const& other ) const
  {
    return kind == other.kind && operands == other.operands && output == other.output;
  }
};

struct Netlist
{
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;

  bool operator==( Netlist const& other ) const = default;
};

enum class ParseErrorKind : std::uint8_t
{
  UnknownDirective,
  NonNigCover,
  UndefinedSignal,
  DuplicateDriver,
  MissingModelSections
};

std::string_view to_string( ParseErrorKind kind );

/*! \brief Raised by `parse_blif` and `netlist_from_json`; carries the offending line. */
class ParseError : public InputError
{
public:
  ParseError( ParseErrorKind kind, std::size_t line, std::string const& detail );

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

private:
  ParseErrorKind kind_;
  std::size_t line_;
};

/*! \brief Parses the BLIF subset into a validated netlist.
 *
 * Gate order is file order. A `.names` block is accepted when its cover
 * evaluates to INV or NOR2; `NOR(a,a)` is normalized to `INV(a)`. Constant
 * and identity covers are rejected. Throws `ParseError`.
 */
Netlist parse_blif( std::string_view text );

/*! \brief Writes a netlist as BLIF using canonical covers (`0 1`, `00 1`). */
std::string write_blif( Netlist const& netlist );

enum class Severity : std::uint8_t
{
  Error,
  Warning
};

enum class ViolationKind : std::uint8_t
{
  UndefinedSignal,
  DuplicateDriver,
  UndrivenOutput,
  BadArity,
  CombinationalCycle,
  DanglingGate
};

std::string_view to_string( ViolationKind kind );

struct Violation
{
  ViolationKind kind;
  Severity severity;
  std::string signal;
  std::string message;
  std::size_t line{ 0 };

  bool is_error() const { return severity == Severity::Error; }
};

/*! \brief Reports every broken netlist invariant.
 *
 * Combinational cycles and gates with no path to a primary output are
 * reported as warnings. The list is empty iff the netlist is clean.
 */
std::vector<Violation> check_semantics( Netlist const& netlist );

nlohmann::json netlist_to_json( Netlist const& netlist );

/*! \brief Reads the JSON mirror; validates with the same rules as `parse_blif`. */
Netlist netlist_from_json( nlohmann::json const& j );

/*! \brief Loads a `.blif` or `.json` netlist from disk, chosen by extension. */
Netlist load_netlist( std::string const& path );

} // namespace saga
