#pragma once

#include "greendcn/graphkit/ffd.hpp"
#include "greendcn/graphkit/gomory_hu.hpp"
#include "greendcn/graphkit/kmeans_pp.hpp"
#include "greendcn/graphkit/max_flow.hpp"
#include "greendcn/graphkit/min_k_cut.hpp"
#include "greendcn/graphkit/weighted_graph.hpp"
