#pragma once

#include "tropedwards/error.hpp"
#include "tropedwards/rational.hpp"
#include "tropedwards/series.hpp"
#include "tropedwards/bivariate.hpp"
#include "tropedwards/edwards.hpp"
#include "tropedwards/tropcurve.hpp"
#include "tropedwards/thetaparam.hpp"
#include "tropedwards/bttree.hpp"
#include "tropedwards/expr.hpp"
#include "tropedwards/json_io.hpp"
#include "tropedwards/svg.hpp"
