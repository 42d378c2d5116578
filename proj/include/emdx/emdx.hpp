#pragma once

#include "aggregate.hpp"
#include "correlation.hpp"
#include "emd.hpp"
#include "extrema.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "spectral.hpp"
#include "spline.hpp"
#include "types.hpp"
