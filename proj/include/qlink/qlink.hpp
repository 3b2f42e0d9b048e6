#pragma once

// Umbrella header: analytic models, simulation engine, protocol machines,
// experiment sweeps and configuration plumbing.

#include "qlink/analytic.hpp"
#include "qlink/config.hpp"
#include "qlink/errors.hpp"
#include "qlink/event_queue.hpp"
#include "qlink/params.hpp"
#include "qlink/protocol_config.hpp"
#include "qlink/protocol_mbk.hpp"
#include "qlink/protocol_mepl.hpp"
#include "qlink/protocol_mps.hpp"
#include "qlink/protocols.hpp"
#include "qlink/random.hpp"
#include "qlink/sim.hpp"
#include "qlink/simulate.hpp"
#include "qlink/stats.hpp"
#include "qlink/sweep.hpp"
#include "qlink/version.hpp"
