#pragma once

#include "span_shrink/cluster1d.hpp"
#include "span_shrink/errors.hpp"
#include "span_shrink/likelihood.hpp"
#include "span_shrink/order_stats.hpp"
#include "span_shrink/rng.hpp"
#include "span_shrink/sample.hpp"
#include "span_shrink/shrinkage.hpp"
#include "span_shrink/simlab.hpp"
#include "span_shrink/specfun.hpp"
#include "span_shrink/verdict.hpp"
#include "span_shrink/version.hpp"
