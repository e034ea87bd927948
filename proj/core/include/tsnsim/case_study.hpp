#pragma once

#include "tsnsim/scenario.hpp"

namespace tsnsim {

// The evaluation network: four end stations on two TSN/SDN switches, three
// staggered 100 Mbit/s real-time flows converging on node3, and one
// reconfiguration round per admitted flow.
Scenario build_case_study(RunMode mode);

}  // namespace tsnsim
