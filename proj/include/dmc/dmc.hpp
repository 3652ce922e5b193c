#pragma once

// Umbrella header for the diameter matrix completion toolkit.

#include "dmc/conrmc.hpp"
#include "dmc/factor.hpp"
#include "dmc/gadgets.hpp"
#include "dmc/io.hpp"
#include "dmc/matrix.hpp"
#include "dmc/oracle.hpp"
#include "dmc/setsystem.hpp"
#include "dmc/solvers.hpp"
#include "dmc/twosat.hpp"
