#pragma once

#include "spindimer/config.hpp"
#include "spindimer/error.hpp"
#include "spindimer/io.hpp"
#include "spindimer/matrix.hpp"
#include "spindimer/measures.hpp"
#include "spindimer/model.hpp"
#include "spindimer/selftest.hpp"
#include "spindimer/sweep.hpp"
#include "spindimer/thermal.hpp"
