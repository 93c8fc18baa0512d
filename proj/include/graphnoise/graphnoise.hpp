#pragma once

#include "graphnoise/community.hpp"
#include "graphnoise/dataset.hpp"
#include "graphnoise/error.hpp"
#include "graphnoise/gcn.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/hash.hpp"
#include "graphnoise/noise.hpp"
#include "graphnoise/noise_community.hpp"
#include "graphnoise/noise_global.hpp"
#include "graphnoise/noise_local.hpp"
#include "graphnoise/rng.hpp"
#include "graphnoise/roles.hpp"
#include "graphnoise/sweep.hpp"
