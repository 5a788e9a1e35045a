#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "chaininf/core/types.hpp"

namespace chaininf {

/// Ket notation, e.g. "0.3669|t> + 0.6331|f>": four decimals per coefficient,
/// one term per element in row-major order, labels comma-joined.
template <typename Scalar>
std::string to_ket(const State<Scalar>& w, int decimals = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << " + ";
    os << static_cast<double>(w(i)) << '|' << w.space().label_of(i) << '>';
  }
  return os.str();
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const State<Scalar>& w) {
  return os << to_ket(w);
}

}  // namespace chaininf
