#pragma once

#include "hbt/contour.hpp"
#include "hbt/correlator.hpp"
#include "hbt/csv.hpp"
#include "hbt/error.hpp"
#include "hbt/model.hpp"
#include "hbt/random.hpp"
#include "hbt/streams.hpp"
#include "hbt/sweep.hpp"
