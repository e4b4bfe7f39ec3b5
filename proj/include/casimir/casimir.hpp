#pragma once

#include "casimir/compensated_sum.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/fixtures.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/parallel.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/quantities.hpp"
#include "casimir/reproduce.hpp"
#include "casimir/thermo.hpp"
