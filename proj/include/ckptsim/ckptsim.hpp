#pragma once

#include "energy_model.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "ledger.hpp"
#include "report.hpp"
#include "scenario.hpp"
#include "strategy.hpp"
#include "trace_io.hpp"
