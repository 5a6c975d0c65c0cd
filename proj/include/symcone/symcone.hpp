#pragma once

#include "symcone/chambers.hpp"
#include "symcone/errors.hpp"
#include "symcone/io.hpp"
#include "symcone/lattice.hpp"
#include "symcone/lp.hpp"
#include "symcone/matrix.hpp"
#include "symcone/models.hpp"
#include "symcone/moves.hpp"
#include "symcone/perturb.hpp"
#include "symcone/planner.hpp"
#include "symcone/rational.hpp"
#include "symcone/reflection.hpp"
