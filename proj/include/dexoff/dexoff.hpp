#pragma once

#include "dexoff/dexelize.hpp"
#include "dexoff/error.hpp"
#include "dexoff/grid.hpp"
#include "dexoff/interval.hpp"
#include "dexoff/io.hpp"
#include "dexoff/mesh.hpp"
#include "dexoff/morphology.hpp"
#include "dexoff/offset3d.hpp"
#include "dexoff/oracle.hpp"
#include "dexoff/sweep_power.hpp"
#include "dexoff/sweep_voronoi.hpp"
#include "dexoff/vertex.hpp"
#include "dexoff/bench.hpp"
