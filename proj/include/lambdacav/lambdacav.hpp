#pragma once

#include "config.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"
#include "simulation.hpp"
#include "verification.hpp"
