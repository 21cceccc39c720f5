#pragma once

// Umbrella include for the whole library.

#include "gelfree/characteristics.hpp"
#include "gelfree/config.hpp"
#include "gelfree/csv.hpp"
#include "gelfree/errors.hpp"
#include "gelfree/laplace.hpp"
#include "gelfree/massflow.hpp"
#include "gelfree/measure.hpp"
#include "gelfree/rootfind.hpp"
#include "gelfree/selfsimilar.hpp"
#include "gelfree/validate.hpp"
