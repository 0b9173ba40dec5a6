#pragma once

#include "sgweyl/asymptotics.hpp"
#include "sgweyl/core.hpp"
#include "sgweyl/cornerflow.hpp"
#include "sgweyl/io.hpp"
#include "sgweyl/quadrature.hpp"
#include "sgweyl/special.hpp"
#include "sgweyl/spectrum.hpp"
#include "sgweyl/symbols.hpp"
#include "sgweyl/traces.hpp"
