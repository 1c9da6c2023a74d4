#pragma once

#include "attacks.hpp"
#include "core.hpp"
#include "data.hpp"
#include "metrics.hpp"
#include "regularizers.hpp"
#include "training.hpp"
