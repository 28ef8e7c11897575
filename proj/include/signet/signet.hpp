#pragma once

// Umbrella header.

#include "signet/analysis.hpp"
#include "signet/commands.hpp"
#include "signet/config.hpp"
#include "signet/cross_validate.hpp"
#include "signet/csv.hpp"
#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/excitation.hpp"
#include "signet/integrate.hpp"
#include "signet/linalg.hpp"
#include "signet/protocol.hpp"
#include "signet/rng.hpp"
#include "signet/signed_graph.hpp"
#include "signet/sim.hpp"
#include "signet/toml.hpp"
