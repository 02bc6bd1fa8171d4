#include "saga/netlist.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace saga
{

std::string_view to_string( GateKind kind )
{
  return kind == GateKind::Inv ? "INV" : "NOR2";
}

std::string_view to_string( ParseErrorKind kind )
{
  switch ( kind )
  {
  case ParseErrorKind::UnknownDirective:
    return "UnknownDirective";
  case ParseErrorKind::NonNigCover:
    return "NonNigCover";
  case ParseErrorKind::UndefinedSignal:
    return "UndefinedSignal";
  case ParseErrorKind::DuplicateDriver:
    return "DuplicateDriver";
  case ParseErrorKind::MissingModelSections:
    return "MissingModelSections";
  }
  return "?";
}

std::string_view to_string( ViolationKind kind )
{
  switch ( kind )
  {
  case ViolationKind::UndefinedSignal:
    return "UndefinedSignal";
  case ViolationKind::DuplicateDriver:
    return "DuplicateDriver";
  case ViolationKind::UndrivenOutput:
    return "UndrivenOutput";
  case ViolationKind::BadArity:
    return "BadArity";
  case ViolationKind::CombinationalCycle:
    return "CombinationalCycle";
  case ViolationKind::DanglingGate:
    return "DanglingGate";
  }
  return "?";
}

ParseError::ParseError( ParseErrorKind kind, std::size_t line, std::string const& detail )
    : InputError( line > 0 ? fmt::format( "line {}: {}: {}", line, to_string( kind ), detail )
                           : fmt::format( "{}: {}", to_string( kind ), detail ) ),
      kind_( kind ),
      line_( line )
{
}

namespace
{

struct LogicalLine
{
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<std::string> split_ws( std::string_view text )
{
  std::vector<std::string> tokens;
  std::size_t i = 0;
  auto const is_space = []( char c ) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; };
  while ( i < text.size() )
  {
    while ( i < text.size() && is_space( text[i] ) )
      ++i;
    auto const start = i;
    while ( i < text.size() && !is_space( text[i] ) )
      ++i;
    if ( i > start )
      tokens.emplace_back( text.substr( start, i - start ) );
  }
  return tokens;
}

/* strips comments, joins `\` continuations, drops blank lines */
std::vector<LogicalLine> logical_lines( std::string_view text )
{
  std::vector<LogicalLine> lines;
  std::string pending;
  std::size_t pending_start = 0;
  std::size_t number = 0;
  std::size_t pos = 0;
  while ( pos <= text.size() )
  {
    auto end = text.find( '\n', pos );
    if ( end == std::string_view::npos )
      end = text.size();
    ++number;
    auto raw = text.substr( pos, end - pos );
    if ( auto const hash = raw.find( '#' ); hash != std::string_view::npos )
      raw = raw.substr( 0, hash );
    while ( !raw.empty() && ( raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t' ) )
      raw.remove_suffix( 1 );

    if ( pending.empty() )
      pending_start = number;
    bool const continued = !raw.empty() && raw.back() == '\\';
    if ( continued )
      raw.remove_suffix( 1 );
    pending.append( raw );
    pending.push_back( ' ' );
    if ( !continued || end == text.size() )
    {
      auto tokens = split_ws( pending );
      if ( !tokens.empty() )
        lines.push_back( { pending_start, std::move( tokens ) } );
      pending.clear();
    }
    pos = end + 1;
  }
  return lines;
}

struct NamesBlock
{
  std::size_t line{ 0 };
  std::vector<std::string> signals;
  std::vector<std::pair<std::string, char>> rows;
};

/* evaluates a single-output cover on one input assignment */
std::optional<bool> cover_value( NamesBlock const& block, std::uint32_t assignment )
{
  auto const n = block.signals.size() - 1;
  if ( block.rows.empty() )
    return false;
  char const phase = block.rows.front().second;
  bool hit = false;
  for ( auto const& [plane, out] : block.rows )
  {
    if ( out != phase )
      return std::nullopt;
    bool match = true;
    for ( std::size_t i = 0; i < n; ++i )
    {
      bool const bit = ( assignment >> i ) & 1u;
      if ( ( plane[i] == '1' && !bit ) || ( plane[i] == '0' && bit ) )
        match = false;
    }
    hit = hit || match;
  }
  return phase == '1' ? hit : !hit;
}

Gate classify_cover( NamesBlock const& block )
{
  auto const fail = [&]( std::string const& why ) {
    return ParseError( ParseErrorKind::NonNigCover, block.line, fmt::format( "'{}': {}", block.signals.back(), why ) );
  };

  auto const n = block.signals.size() - 1;
  if ( n == 0 )
    throw fail( "constant covers are not supported" );
  if ( n > 2 )
    throw fail( fmt::format( "{}-input cover is outside the INV/NOR2 library", n ) );

  for ( auto const& [plane, out] : block.rows )
  {
    if ( plane.size() != n )
      throw fail( "cover row width does not match the number of inputs" );
    if ( !std::all_of( plane.begin(), plane.end(), []( char c ) { return c == '0' || c == '1' || c == '-'; } ) )
      throw fail( fmt::format( "bad cover row '{}'", plane ) );
    if ( out != '0' && out != '1' )
      throw fail( "cover output must be 0 or 1" );
  }

  std::array<bool, 4> table{};
  for ( std::uint32_t a = 0; a < ( 1u << n ); ++a )
  {
    auto const v = cover_value( block, a );
    if ( !v )
      throw fail( "cover mixes on-set and off-set rows" );
    table[a] = *v;
  }

  Gate gate;
  gate.output = block.signals.back();
  gate.line = block.line;
  if ( n == 1 )
  {
    if ( table[0] && !table[1] )
    {
      gate.kind = GateKind::Inv;
      gate.operands = { block.signals[0] };
      return gate;
    }
    throw fail( table[0] == table[1] ? "constant cover" : "identity (buffer) cover" );
  }

  if ( block.signals[0] == block.signals[1] )
  {
    /* both columns read the same signal: only assignments 00 and 11 are reachable */
    if ( table[0] && !table[3] )
    {
      gate.kind = GateKind::Inv;
      gate.operands = { block.signals[0] };
      return gate;
    }
    throw fail( "cover is not NOR2" );
  }
  if ( table[0] && !table[1] && !table[2] && !table[3] )
  {
    gate.kind = GateKind::Nor2;
    gate.operands = { block.signals[0], block.signals[1] };
    return gate;
  }
  throw fail( "cover is not NOR2" );
}

ParseErrorKind to_parse_error( ViolationKind kind )
{
  switch ( kind )
  {
  case ViolationKind::DuplicateDriver:
    return ParseErrorKind::DuplicateDriver;
  case ViolationKind::BadArity:
    return ParseErrorKind::NonNigCover;
  default:
    return ParseErrorKind::UndefinedSignal;
  }
}

void throw_first_error( std::vector<Violation> const& violations )
{
  for ( auto const& v : violations )
  {
    if ( v.is_error() )
      throw ParseError( to_parse_error( v.kind ), v.line, v.message );
  }
}

void normalize_self_nor( Gate& gate )
{
  if ( gate.kind == GateKind::Nor2 && gate.operands.size() == 2 && gate.operands[0] == gate.operands[1] )
  {
    gate.kind = GateKind::Inv;
    gate.operands.pop_back();
  }
}

} // namespace

Netlist parse_blif( std::string_view text )
{
  Netlist netlist;
  bool seen_model = false;
  bool seen_inputs = false;
  bool seen_outputs = false;
  bool seen_end = false;
  std::size_t outputs_line = 0;
  std::optional<NamesBlock> block;
  std::unordered_set<std::string> defined;

  auto const define = [&]( std::string const& signal, std::size_t line ) {
    if ( !defined.insert( signal ).second )
      throw ParseError( ParseErrorKind::DuplicateDriver, line, fmt::format( "signal '{}' is driven twice", signal ) );
  };

  auto const flush = [&]() {
    if ( !block )
      return;
    auto gate = classify_cover( *block );
    define( gate.output, gate.line );
    netlist.gates.push_back( std::move( gate ) );
    block.reset();
  };

  for ( auto& [number, tokens] : logical_lines( text ) )
  {
    auto const& head = tokens.front();
    if ( seen_end )
      throw ParseError( ParseErrorKind::UnknownDirective, number, fmt::format( "content after .end: '{}'", head ) );

    if ( head.front() != '.' )
    {
      if ( !block )
        throw ParseError( ParseErrorKind::UnknownDirective, number, fmt::format( "unexpected '{}' outside a .names block", head ) );
      auto const n = block->signals.size() - 1;
      if ( n == 0 && tokens.size() == 1 )
        block->rows.emplace_back( "", head.size() == 1 ? head[0] : '?' );
      else if ( tokens.size() == 2 && tokens[1].size() == 1 )
        block->rows.emplace_back( tokens[0], tokens[1][0] );
      else
        throw ParseError( ParseErrorKind::NonNigCover, number, "malformed cover row" );
      continue;
    }

    flush();
    if ( head == ".model" )
    {
      if ( seen_model )
        throw ParseError( ParseErrorKind::UnknownDirective, number, "multiple models are not supported" );
      seen_model = true;
      netlist.name = tokens.size() > 1 ? tokens[1] : "";
      continue;
    }
    if ( !seen_model )
      throw ParseError( ParseErrorKind::MissingModelSections, number, fmt::format( "'{}' before .model", head ) );

    if ( head == ".inputs" )
    {
      seen_inputs = true;
      for ( std::size_t i = 1; i < tokens.size(); ++i )
      {
        define( tokens[i], number );
        netlist.inputs.push_back( tokens[i] );
      }
    }
    else if ( head == ".outputs" )
    {
      seen_outputs = true;
      outputs_line = outputs_line == 0 ? number : outputs_line;
      for ( std::size_t i = 1; i < tokens.size(); ++i )
      {
        if ( std::find( netlist.outputs.begin(), netlist.outputs.end(), tokens[i] ) != netlist.outputs.end() )
          throw ParseError( ParseErrorKind::DuplicateDriver, number, fmt::format( "output '{}' listed twice", tokens[i] ) );
        netlist.outputs.push_back( tokens[i] );
      }
    }
    else if ( head == ".names" )
    {
      if ( tokens.size() < 2 )
        throw ParseError( ParseErrorKind::NonNigCover, number, ".names without signals" );
      block = NamesBlock{ number, { tokens.begin() + 1, tokens.end() }, {} };
    }
    else if ( head == ".end" )
    {
      seen_end = true;
    }
    else
    {
      throw ParseError( ParseErrorKind::UnknownDirective, number, fmt::format( "unsupported directive '{}'", head ) );
    }
  }
  flush();

  if ( !seen_model || !seen_inputs || !seen_outputs )
  {
    std::string missing;
    for ( auto const& [seen, label] : { std::pair{ seen_model, ".model" }, { seen_inputs, ".inputs" }, { seen_outputs, ".outputs" } } )
    {
      if ( !seen )
        missing += missing.empty() ? label : fmt::format( ", {}", label );
    }
    throw ParseError( ParseErrorKind::MissingModelSections, 0, fmt::format( "missing {}", missing ) );
  }

  auto violations = check_semantics( netlist );
  /* gate violations carry their own line; the rest concern the .outputs list */
  for ( auto& v : violations )
  {
    if ( v.line == 0 )
      v.line = outputs_line;
  }
  throw_first_error( violations );
  return netlist;
}

std::string write_blif( Netlist const& netlist )
{
  std::ostringstream os;
  os << ".model" << ( netlist.name.empty() ? "" : " " + netlist.name ) << '\n';
  os << ".inputs";
  for ( auto const& s : netlist.inputs )
    os << ' ' << s;
  os << "\n.outputs";
  for ( auto const& s : netlist.outputs )
    os << ' ' << s;
  os << '\n';
  for ( auto const& gate : netlist.gates )
  {
    os << ".names";
    for ( auto const& s : gate.operands )
      os << ' ' << s;
    os << ' ' << gate.output << '\n';
    os << ( gate.kind == GateKind::Inv ? "0 1\n" : "00 1\n" );
  }
  os << ".end\n";
  return os.str();
}

std::vector<Violation> check_semantics( Netlist const& netlist )
{
  std::vector<Violation> out;
  auto const error = [&]( ViolationKind kind, std::string signal, std::string message, std::size_t line = 0 ) {
    out.push_back( { kind, Severity::Error, std::move( signal ), std::move( message ), line } );
  };

  std::unordered_set<std::string> inputs;
  for ( auto const& s : netlist.inputs )
  {
    if ( !inputs.insert( s ).second )
      error( ViolationKind::DuplicateDriver, s, fmt::format( "input '{}' declared twice", s ) );
  }

  /* signal -> driving gate index */
  std::unordered_map<std::string, std::size_t> driver;
  for ( std::size_t i = 0; i < netlist.gates.size(); ++i )
  {
    auto const& g = netlist.gates[i];
    if ( inputs.count( g.output ) || !driver.emplace( g.output, i ).second )
      error( ViolationKind::DuplicateDriver, g.output, fmt::format( "signal '{}' is driven twice", g.output ), g.line );
  }

  for ( auto const& g : netlist.gates )
  {
    if ( g.operands.size() != arity( g.kind ) )
      error( ViolationKind::BadArity, g.output,
             fmt::format( "{} gate '{}' has {} operands", to_string( g.kind ), g.output, g.operands.size() ), g.line );
    else if ( g.kind == GateKind::Nor2 && g.operands[0] == g.operands[1] )
      error( ViolationKind::BadArity, g.output, fmt::format( "NOR2 gate '{}' repeats operand '{}'", g.output, g.operands[0] ), g.line );
    for ( auto const& op : g.operands )
    {
      if ( !inputs.count( op ) && !driver.count( op ) )
        error( ViolationKind::UndefinedSignal, op, fmt::format( "gate '{}' reads undefined signal '{}'", g.output, op ), g.line );
    }
  }

  std::unordered_set<std::string> seen_outputs;
  for ( auto const& s : netlist.outputs )
  {
    if ( !seen_outputs.insert( s ).second )
      error( ViolationKind::DuplicateDriver, s, fmt::format( "output '{}' listed twice", s ) );
    else if ( inputs.count( s ) )
      error( ViolationKind::UndrivenOutput, s, fmt::format( "output '{}' is an input passthrough, not a gate output", s ) );
    else if ( !driver.count( s ) )
      error( ViolationKind::UndefinedSignal, s, fmt::format( "output '{}' is not driven by any gate", s ) );
  }

  /* the structural warnings below only make sense on a well-formed gate graph */
  if ( !out.empty() )
    return out;

  auto const n = netlist.gates.size();
  std::vector<std::vector<std::size_t>> gate_fanin( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    for ( auto const& op : netlist.gates[i].operands )
    {
      if ( auto it = driver.find( op ); it != driver.end() )
        gate_fanin[i].push_back( it->second );
    }
  }

  /* iterative DFS, colors: 0 unvisited, 1 on stack, 2 done */
  std::vector<std::uint8_t> color( n, 0 );
  std::vector<std::size_t> parent( n, n );
  for ( std::size_t root = 0; root < n; ++root )
  {
    if ( color[root] )
      continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{ { root, 0 } };
    color[root] = 1;
    while ( !stack.empty() )
    {
      auto& [v, next] = stack.back();
      if ( next < gate_fanin[v].size() )
      {
        auto const w = gate_fanin[v][next++];
        if ( color[w] == 0 )
        {
          color[w] = 1;
          parent[w] = v;
          stack.emplace_back( w, 0 );
        }
        else if ( color[w] == 1 )
        {
          /* back edge v -> w closes a cycle through the stack */
          std::vector<std::string> members{ netlist.gates[w].output };
          for ( auto u = v; u != w; u = parent[u] )
            members.push_back( netlist.gates[u].output );
          std::reverse( members.begin() + 1, members.end() );
          out.push_back( { ViolationKind::CombinationalCycle, Severity::Warning, netlist.gates[w].output,
                           fmt::format( "combinational cycle: {}", fmt::join( members, " -> " ) ), netlist.gates[w].line } );
        }
      }
      else
      {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }

  std::vector<bool> live( n, false );
  std::vector<std::size_t> work;
  for ( auto const& s : netlist.outputs )
  {
    auto const g = driver.at( s );
    if ( !live[g] )
    {
      live[g] = true;
      work.push_back( g );
    }
  }
  while ( !work.empty() )
  {
    auto const g = work.back();
    work.pop_back();
    for ( auto const f : gate_fanin[g] )
    {
      if ( !live[f] )
      {
        live[f] = true;
        work.push_back( f );
      }
    }
  }
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( !live[i] )
      out.push_back( { ViolationKind::DanglingGate, Severity::Warning, netlist.gates[i].output,
                       fmt::format( "gate '{}' has no path to a primary output", netlist.gates[i].output ), netlist.gates[i].line } );
  }
  return out;
}

nlohmann::json netlist_to_json( Netlist const& netlist )
{
  nlohmann::json gates = nlohmann::json::array();
  for ( auto const& g : netlist.gates )
    gates.push_back( { { "kind", to_string( g.kind ) }, { "operands", g.operands }, { "output", g.output } } );
  return { { "name", netlist.name }, { "inputs", netlist.inputs }, { "outputs", netlist.outputs }, { "gates", gates } };
}

Netlist netlist_from_json( nlohmann::json const& j )
{
  auto const missing = [=]( std::string const& what ) {
    return ParseError( ParseErrorKind::MissingModelSections, 0, fmt::format( "netlist JSON: {}", what ) );
  };
  if ( !j.is_object() )
    throw missing( "top level is not an object" );

  auto const strings = [&]( char const* key ) {
    if ( !j.contains( key ) || !j[key].is_array() )
      throw missing( fmt::format( "'{}' must be an array", key ) );
    std::vector<std::string> values;
    for ( auto const& item : j[key] )
    {
      if ( !item.is_string() )
        throw missing( fmt::format( "'{}' must hold strings", key ) );
      values.push_back( item.get<std::string>() );
    }
    return values;
  };

  Netlist netlist;
  netlist.name = j.value( "name", std::string{} );
  netlist.inputs = strings( "inputs" );
  netlist.outputs = strings( "outputs" );
  if ( !j.contains( "gates" ) || !j["gates"].is_array() )
    throw missing( "'gates' must be an array" );
  for ( auto const& item : j["gates"] )
  {
    if ( !item.is_object() || !item.contains( "kind" ) || !item.contains( "operands" ) || !item.contains( "output" ) ||
         !item["kind"].is_string() || !item["operands"].is_array() || !item["output"].is_string() )
      throw missing( "each gate needs string 'kind', array 'operands' and string 'output'" );
    Gate gate;
    auto const kind = item["kind"].get<std::string>();
    if ( kind == "INV" )
      gate.kind = GateKind::Inv;
    else if ( kind == "NOR2" )
      gate.kind = GateKind::Nor2;
    else
      throw ParseError( ParseErrorKind::NonNigCover, 0, fmt::format( "gate kind '{}' is outside the INV/NOR2 library", kind ) );
    for ( auto const& op : item["operands"] )
    {
      if ( !op.is_string() )
        throw missing( "gate operands must be strings" );
      gate.operands.push_back( op.get<std::string>() );
    }
    gate.output = item["output"].get<std::string>();
    normalize_self_nor( gate );
    netlist.gates.push_back( std::move( gate ) );
  }
  throw_first_error( check_semantics( netlist ) );
  return netlist;
}

Netlist load_netlist( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw InputError( fmt::format( "cannot open '{}'", path ) );
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if ( std::filesystem::path( path ).extension() == ".json" )
  {
    auto const j = nlohmann::json::parse( buffer.str(), nullptr, false );
    if ( j.is_discarded() )
      throw InputError( fmt::format( "'{}' is not valid JSON", path ) );
    return netlist_from_json( j );
  }
  return parse_blif( buffer.str() );
}

} // namespace saga
