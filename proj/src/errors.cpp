#include "fdetect/errors.hpp"

#include <sstream>

namespace fdetect {

namespace {

std::string describe(std::size_t step, double min_condition, double margin) {
  std::ostringstream os;
  os.precision(17);
  os << "no feasible candidate at step " << step << ": min condition value " << min_condition
     << " exceeds 1, domination margin " << margin;
  return os.str();
}

} // namespace

NoFeasibleCandidate::NoFeasibleCandidate(std::size_t step, double min_condition, double margin)
    : NumericalError(describe(step, min_condition, margin)),
      step_(step),
      min_condition_(min_condition),
      margin_(margin) {}

} // namespace fdetect
