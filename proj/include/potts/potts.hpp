#pragma once

#include "potts/bigint.hpp"
#include "potts/crt.hpp"
#include "potts/engine.hpp"
#include "potts/error.hpp"
#include "potts/graph.hpp"
#include "potts/oracle.hpp"
#include "potts/partition.hpp"
#include "potts/polynomial.hpp"
#include "potts/roots.hpp"
#include "potts/schedule.hpp"
#include "potts/treedecomp.hpp"
#include "potts/weights.hpp"
