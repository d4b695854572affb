#pragma once

// Umbrella header for the covering-alignment library.

#include "covalign/cover_solvers.hpp"
#include "covalign/diploid.hpp"
#include "covalign/errors.hpp"
#include "covalign/io.hpp"
#include "covalign/labeled_dag.hpp"
#include "covalign/reduction.hpp"
#include "covalign/rng.hpp"
#include "covalign/strings.hpp"
