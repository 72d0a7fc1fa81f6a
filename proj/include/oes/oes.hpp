#pragma once

// Umbrella header: energy- and QoS-aware load balancing for a simulated
// O-RAN deployment — channel model, exact/greedy optimizers, closed control
// loop, and reporting.

#include "oes/channel.hpp"
#include "oes/common.hpp"
#include "oes/control_loop.hpp"
#include "oes/io.hpp"
#include "oes/latency.hpp"
#include "oes/metrics.hpp"
#include "oes/problem.hpp"
#include "oes/problem_io.hpp"
#include "oes/rng.hpp"
#include "oes/runner.hpp"
#include "oes/scenario.hpp"
#include "oes/scenario_io.hpp"
#include "oes/solve.hpp"
