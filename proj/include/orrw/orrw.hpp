#pragma once

#include "orrw/closed_forms.hpp"
#include "orrw/dv.hpp"
#include "orrw/entropy_flow.hpp"
#include "orrw/exact_engine.hpp"
#include "orrw/extended_real.hpp"
#include "orrw/fixtures.hpp"
#include "orrw/graph.hpp"
#include "orrw/kernels.hpp"
#include "orrw/perron.hpp"
#include "orrw/rates.hpp"
#include "orrw/rng.hpp"
#include "orrw/simulate.hpp"
