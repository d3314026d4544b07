#pragma once

#include "gaugechain/capacitance.hpp"
#include "gaugechain/chain.hpp"
#include "gaugechain/contour.hpp"
#include "gaugechain/envelope.hpp"
#include "gaugechain/mat2.hpp"
#include "gaugechain/parallel.hpp"
#include "gaugechain/propagation.hpp"
#include "gaugechain/rng.hpp"
#include "gaugechain/statistics.hpp"
#include "gaugechain/tridiagonal.hpp"
#include "gaugechain/winding.hpp"
#include "gaugechain/zeta.hpp"
