#pragma once

// Everything at once.

#include "coarsecoh/space.hpp"
#include "coarsecoh/subsets.hpp"
#include "coarsecoh/maps.hpp"
#include "coarsecoh/cover.hpp"
#include "coarsecoh/finab.hpp"
#include "coarsecoh/cech.hpp"
#include "coarsecoh/cochain.hpp"
#include "coarsecoh/homotopy.hpp"
#include "coarsecoh/ends.hpp"
#include "coarsecoh/higson.hpp"
#include "coarsecoh/mv.hpp"
#include "coarsecoh/config.hpp"
