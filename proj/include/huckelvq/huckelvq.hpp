#pragma once

// Umbrella header: the full pipeline from connectivity to spectra.

#include "huckelvq/core.hpp"
#include "huckelvq/molgraph.hpp"
#include "huckelvq/oracle.hpp"
#include "huckelvq/optim.hpp"
#include "huckelvq/pauli.hpp"
#include "huckelvq/simulator.hpp"
#include "huckelvq/solver.hpp"
