#pragma once

#include "liesig/errors.hpp"
#include "liesig/group.hpp"
#include "liesig/io.hpp"
#include "liesig/kernel.hpp"
#include "liesig/parallel.hpp"
#include "liesig/path.hpp"
#include "liesig/randwalk.hpp"
#include "liesig/rng.hpp"
#include "liesig/signature.hpp"
#include "liesig/stats.hpp"
#include "liesig/tensor.hpp"
