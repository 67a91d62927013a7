#pragma once

#include <stdexcept>
#include <string>

namespace ownref {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& msg);
  int line, column;
};

class WellFormednessError : public Error {
public:
  using Error::Error;
};

class SimpleTypeError : public Error {
public:
  using Error::Error;
};

class UnknownPrimitive : public Error {
public:
  using Error::Error;
};

class SolverUnavailable : public Error {
public:
  using Error::Error;
};

class SolverTimeout : public Error {
public:
  using Error::Error;
};

class SolverFailure : public Error {
public:
  using Error::Error;
};

} // namespace ownref
