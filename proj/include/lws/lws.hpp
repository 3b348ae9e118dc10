#pragma once

#include "lws/bench.hpp"
#include "lws/errors.hpp"
#include "lws/heuristics.hpp"
#include "lws/hp.hpp"
#include "lws/lattice.hpp"
#include "lws/oracle.hpp"
#include "lws/rng.hpp"
#include "lws/search.hpp"
