#pragma once

#include <random>

#include "confgeo/confgeo.hpp"
#include "confgeo/verify.hpp"

namespace ct {

using namespace confgeo;

inline Configuration rand_config(std::mt19937_64& rng, int dim, int n, double hw = 2.0) {
  return verify::random_configuration(rng, dim, n, hw);
}

}  // namespace ct
