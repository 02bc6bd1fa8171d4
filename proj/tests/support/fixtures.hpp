#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <saga/dag.hpp>
#include <saga/netlist.hpp>

namespace fixtures
{

inline std::string data_path( std::string const& relative )
{
  return std::string( SAGA_DATA_DIR ) + "/" + relative;
}

inline std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::filesystem::path> circuit_files()
{
  std::vector<std::filesystem::path> files;
  for ( auto const& e : std::filesystem::directory_iterator( data_path( "circuits" ) ) )
  {
    if ( e.path().extension() == ".blif" )
      files.push_back( e.path() );
  }
  std::sort( files.begin(), files.end() );
  return files;
}

inline saga::Netlist circuit( std::string const& name )
{
  return saga::load_netlist( data_path( "circuits/" + name + ".blif" ) );
}

inline std::vector<std::string> names_of( saga::CircuitDag const& dag, saga::Sequence const& s )
{
  std::vector<std::string> out;
  for ( auto const v : s.order )
    out.push_back( dag.name( v ) );
  return out;
}

inline saga::Sequence sequence_of( saga::CircuitDag const& dag, std::vector<std::string> const& names )
{
  saga::Sequence s;
  for ( auto const& n : names )
    s.order.push_back( dag.vertex( n ) );
  return s;
}

} // namespace fixtures
