#pragma once

#include "rhs/errors.hpp"
#include "rhs/hypergraph.hpp"
#include "rhs/linalg.hpp"
#include "rhs/state.hpp"
#include "rhs/randomization.hpp"
#include "rhs/measures.hpp"
#include "rhs/sdp.hpp"
#include "rhs/gmn.hpp"
#include "rhs/parallel.hpp"
#include "rhs/presets.hpp"
#include "rhs/sweep.hpp"
