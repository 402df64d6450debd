#pragma once

#include "anarchy/core.hpp"
#include "anarchy/equilibrium.hpp"
#include "anarchy/errors.hpp"
#include "anarchy/experiments.hpp"
#include "anarchy/grid.hpp"
#include "anarchy/lp.hpp"
#include "anarchy/matrix.hpp"
#include "anarchy/mechanisms.hpp"
#include "anarchy/rng.hpp"
