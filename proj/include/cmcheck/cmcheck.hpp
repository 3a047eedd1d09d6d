#pragma once

#include "cmcheck/precision.hpp"
#include "cmcheck/specfun.hpp"
#include "cmcheck/laurent.hpp"
#include "cmcheck/cmdeg.hpp"
#include "cmcheck/laplace.hpp"
#include "cmcheck/inequalities.hpp"
#include "cmcheck/report.hpp"
#include "cmcheck/suite.hpp"
