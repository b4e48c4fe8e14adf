#include "regada/rng.hpp"

#include <sstream>

#include "regada/errors.hpp"

namespace regada {

std::string Rng::serialize() const {
  std::ostringstream os;
  os << seed_ << " " << engine_;
  return os.str();
}

Rng Rng::deserialize(const std::string& state) {
  std::istringstream is(state);
  std::uint64_t seed = 0;
  if (!(is >> seed)) throw FormatError("rng state: missing seed field");
  Rng rng(seed);
  if (!(is >> rng.engine_)) throw FormatError("rng state: malformed engine state");
  return rng;
}

}  // namespace regada
