#include "pkco/delay.hpp"

#include <algorithm>
#include <stdexcept>

namespace pkco {

void DelayModel::validate() const {
  if (!(floor >= 0.0)) throw std::invalid_argument("floor: must be >= 0");
  if (!(mean >= floor)) throw std::invalid_argument("mean: must be >= floor");
  if (!(variance >= 0.0)) throw std::invalid_argument("variance: must be >= 0");
}

Seconds sample(const DelayModel& model, RngStream& rng) {
  return std::max(model.floor, rng.gaussian(model.mean, model.variance));
}

}  // namespace pkco
