#pragma once

// Umbrella header.

#include "fpb/linalg.hpp"
#include "fpb/probe.hpp"
#include "fpb/discrimination.hpp"
#include "fpb/entropy.hpp"
#include "fpb/numerics.hpp"
#include "fpb/uncertainty.hpp"
#include "fpb/rng.hpp"
#include "fpb/simulator.hpp"
#include "fpb/cli.hpp"
