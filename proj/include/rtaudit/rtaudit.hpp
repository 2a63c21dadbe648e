#pragma once

#include "rtaudit/classify.hpp"
#include "rtaudit/core.hpp"
#include "rtaudit/distmodel.hpp"
#include "rtaudit/errors.hpp"
#include "rtaudit/histogram.hpp"
#include "rtaudit/inferstats.hpp"
#include "rtaudit/ingest.hpp"
#include "rtaudit/plot.hpp"
#include "rtaudit/report.hpp"
#include "rtaudit/simulate.hpp"
#include "rtaudit/special.hpp"
#include "rtaudit/version.hpp"
