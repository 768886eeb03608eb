#pragma once

#include "razak_forge/arith.hpp"
#include "razak_forge/blocks.hpp"
#include "razak_forge/instance.hpp"
#include "razak_forge/poly.hpp"
#include "razak_forge/rank.hpp"
#include "razak_forge/report.hpp"
#include "razak_forge/solve.hpp"
#include "razak_forge/tower.hpp"
