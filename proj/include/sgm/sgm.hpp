#pragma once

#include "sgm/common.hpp"
#include "sgm/set_ops.hpp"
#include "sgm/csr_graph.hpp"
#include "sgm/graph_io.hpp"
#include "sgm/query_graph.hpp"
#include "sgm/schedule.hpp"
#include "sgm/plan.hpp"
#include "sgm/cost_model.hpp"
#include "sgm/arena.hpp"
#include "sgm/aux_graph.hpp"
#include "sgm/engine.hpp"
#include "sgm/generators.hpp"
