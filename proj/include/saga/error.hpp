#pragma once

#include <stdexcept>
#include <string>

namespace saga
{

/*! \brief Base class of every error raised by the library. */
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Bad user input: a malformed file, an unknown name, an invalid config. */
class InputError : public Error
{
public:
  using Error::Error;
};

/*! \brief An internal consistency check failed. Indicates a bug, not bad input. */
class InvariantViolation : public Error
{
public:
  using Error::Error;
};

} // namespace saga
