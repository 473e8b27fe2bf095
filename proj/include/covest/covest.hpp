#pragma once

#include "covest/cost.hpp"
#include "covest/errors.hpp"
#include "covest/estimation.hpp"
#include "covest/group.hpp"
#include "covest/isotypic.hpp"
#include "covest/numerics.hpp"
#include "covest/rep.hpp"
#include "covest/report.hpp"
#include "covest/runner.hpp"
#include "covest/scenario.hpp"
#include "covest/tilde.hpp"
