#pragma once

#include "tempermc/chain.hpp"
#include "tempermc/csv.hpp"
#include "tempermc/harness.hpp"
#include "tempermc/ladder.hpp"
#include "tempermc/normal.hpp"
#include "tempermc/oracle.hpp"
#include "tempermc/parallel.hpp"
#include "tempermc/rng.hpp"
#include "tempermc/scaling.hpp"
#include "tempermc/tempering.hpp"
