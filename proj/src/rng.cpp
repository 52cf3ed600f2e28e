#include "unfold/rng.hpp"

#include <cmath>

#include "unfold/normal.hpp"

namespace unfold {

double RngStream::normal() noexcept { return std_normal_quantile(uniform()); }

double RngStream::exponential() noexcept { return -std::log(uniform()); }

}  // namespace unfold
