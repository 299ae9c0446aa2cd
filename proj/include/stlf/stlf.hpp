#pragma once

#include "stlf/csv.hpp"
#include "stlf/diagnostics.hpp"
#include "stlf/error.hpp"
#include "stlf/estimation.hpp"
#include "stlf/evaluation.hpp"
#include "stlf/forecasting.hpp"
#include "stlf/innovations.hpp"
#include "stlf/lag_polynomial.hpp"
#include "stlf/nelder_mead.hpp"
#include "stlf/sarima_garch.hpp"
#include "stlf/series.hpp"
#include "stlf/serialization.hpp"
#include "stlf/timestamp.hpp"
