#pragma once

#include "deltadiv/delta.hpp"
#include "deltadiv/divergences.hpp"
#include "deltadiv/error.hpp"
#include "deltadiv/experiments.hpp"
#include "deltadiv/records.hpp"
#include "deltadiv/sampling.hpp"
#include "deltadiv/simplex.hpp"
