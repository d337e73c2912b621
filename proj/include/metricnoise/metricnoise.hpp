#pragma once

#include "metricnoise/adcv.hpp"
#include "metricnoise/config.hpp"
#include "metricnoise/dgp.hpp"
#include "metricnoise/error.hpp"
#include "metricnoise/harness.hpp"
#include "metricnoise/io.hpp"
#include "metricnoise/linalg.hpp"
#include "metricnoise/objects.hpp"
#include "metricnoise/parallel.hpp"
#include "metricnoise/random.hpp"
#include "metricnoise/report.hpp"
#include "metricnoise/resampling.hpp"
#include "metricnoise/spectral.hpp"
#include "metricnoise/spline.hpp"
