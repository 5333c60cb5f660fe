#pragma once

#include "greendcn/assignment.hpp"
#include "greendcn/error.hpp"
#include "greendcn/graphkit.hpp"
#include "greendcn/job.hpp"
#include "greendcn/placement.hpp"
#include "greendcn/power.hpp"
#include "greendcn/routing.hpp"
#include "greendcn/simengine.hpp"
#include "greendcn/topology.hpp"
#include "greendcn/workload.hpp"
