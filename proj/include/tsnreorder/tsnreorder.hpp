#pragma once

#include "tsnreorder/rational.hpp"
#include "tsnreorder/curve.hpp"
#include "tsnreorder/trace.hpp"
#include "tsnreorder/metrics.hpp"
#include "tsnreorder/resequencer.hpp"
#include "tsnreorder/bounds.hpp"
#include "tsnreorder/path_analysis.hpp"
#include "tsnreorder/scenarios.hpp"
#include "tsnreorder/case_study.hpp"
#include "tsnreorder/io/csv.hpp"
#include "tsnreorder/io/json.hpp"
#include "tsnreorder/io/table.hpp"
