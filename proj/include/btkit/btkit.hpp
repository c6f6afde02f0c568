#pragma once

#include "btkit/valued.hpp"
#include "btkit/matrix.hpp"
#include "btkit/cartan.hpp"
#include "btkit/lattice.hpp"
#include "btkit/tree.hpp"
#include "btkit/harmonic.hpp"
