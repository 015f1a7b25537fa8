#pragma once

#include "hyperhardy/errors.hpp"
#include "hyperhardy/jet.hpp"
#include "hyperhardy/manifold.hpp"
#include "hyperhardy/grid.hpp"
#include "hyperhardy/band_matrix.hpp"
#include "hyperhardy/radial_function.hpp"
#include "hyperhardy/iterated_log.hpp"
#include "hyperhardy/forms.hpp"
#include "hyperhardy/pencil.hpp"
#include "hyperhardy/supersolution.hpp"
#include "hyperhardy/hardy.hpp"
#include "hyperhardy/rellich.hpp"
#include "hyperhardy/euclid.hpp"
#include "hyperhardy/config.hpp"
#include "hyperhardy/csv.hpp"
#include "hyperhardy/manifest.hpp"
#include "hyperhardy/suites.hpp"
#include "hyperhardy/acceptance.hpp"
