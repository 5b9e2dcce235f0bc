#include "prefrules/error.hpp"

namespace prefrules {

ParseError::ParseError(const std::string& what, std::size_t row)
    : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

}  // namespace prefrules
