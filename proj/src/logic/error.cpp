#include "ownref/logic/error.hpp"

namespace ownref {

ParseError::ParseError(int line, int column, const std::string& msg)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line(line), column(column) {}

} // namespace ownref
