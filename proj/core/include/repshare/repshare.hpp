#pragma once

#include "repshare/aggregation.hpp"
#include "repshare/filter.hpp"
#include "repshare/io.hpp"
#include "repshare/ledger.hpp"
#include "repshare/random.hpp"
#include "repshare/sim.hpp"
#include "repshare/solicitation.hpp"
#include "repshare/types.hpp"
#include "repshare/weighting.hpp"
