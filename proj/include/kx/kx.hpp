#pragma once

#include "kx/baselines.hpp"
#include "kx/campaign.hpp"
#include "kx/core.hpp"
#include "kx/exact.hpp"
#include "kx/instance.hpp"
#include "kx/objective.hpp"
#include "kx/rational.hpp"
#include "kx/search.hpp"
#include "kx/systems.hpp"
