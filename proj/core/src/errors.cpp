#include "mmrank/errors.hpp"

namespace mmrank {

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

void NumericalError::set_iteration(std::size_t t) {
  if (iteration_) return;
  iteration_ = t;
  prepend("iteration " + std::to_string(t));
}

NonconvergentItem::NonconvergentItem(std::size_t item, const std::string& message)
    : NumericalError(message), item_(item) {}

}  // namespace mmrank
