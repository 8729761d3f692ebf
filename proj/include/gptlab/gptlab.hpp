#pragma once

#include "gptlab/drf.hpp"
#include "gptlab/gpt.hpp"
#include "gptlab/hermitian.hpp"
#include "gptlab/json_io.hpp"
#include "gptlab/lp.hpp"
#include "gptlab/polytope.hpp"
#include "gptlab/presets.hpp"
#include "gptlab/spaces.hpp"
#include "gptlab/switch.hpp"
#include "gptlab/tolerances.hpp"
