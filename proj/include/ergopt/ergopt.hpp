#pragma once

#include "ergopt/debruijn.hpp"
#include "ergopt/doubling.hpp"
#include "ergopt/errors.hpp"
#include "ergopt/io.hpp"
#include "ergopt/manifest.hpp"
#include "ergopt/maxplus.hpp"
#include "ergopt/plot.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/rotation.hpp"
#include "ergopt/shiftspace.hpp"
#include "ergopt/simplex.hpp"
#include "ergopt/thermo.hpp"
#include "ergopt/words.hpp"
