#pragma once

#include "confgeo/analysis.hpp"
#include "confgeo/configuration.hpp"
#include "confgeo/coupling.hpp"
#include "confgeo/cylinder.hpp"
#include "confgeo/geodesic.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/gibbs.hpp"
#include "confgeo/io.hpp"
#include "confgeo/potential.hpp"
#include "confgeo/smooth.hpp"
#include "confgeo/test_function.hpp"
#include "confgeo/vec.hpp"
#include "confgeo/vector_field.hpp"

namespace confgeo {
inline constexpr const char* kVersion = "0.1.0";
}
