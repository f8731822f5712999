#pragma once

#include "ebv/bench.hpp"
#include "ebv/error.hpp"
#include "ebv/lu.hpp"
#include "ebv/matrix.hpp"
#include "ebv/parallel.hpp"
#include "ebv/plan.hpp"
