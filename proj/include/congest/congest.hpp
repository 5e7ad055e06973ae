#pragma once

#include "congest/core/generators.hpp"
#include "congest/core/graph.hpp"
#include "congest/core/graph_io.hpp"
#include "congest/core/oracles.hpp"
#include "congest/engine/engine.hpp"
#include "congest/engine/primitives.hpp"
#include "congest/engine/trace.hpp"
#include "congest/apsp.hpp"
#include "congest/bcc.hpp"
#include "congest/mst.hpp"
#include "congest/sssp.hpp"
#include "congest/distk.hpp"
#include "congest/bench.hpp"
