#pragma once

#include "sre/bounds.hpp"
#include "sre/csp.hpp"
#include "sre/dsl.hpp"
#include "sre/equivalence.hpp"
#include "sre/error.hpp"
#include "sre/extraction.hpp"
#include "sre/families.hpp"
#include "sre/graphs.hpp"
#include "sre/io.hpp"
#include "sre/lift.hpp"
#include "sre/maximal.hpp"
#include "sre/multiset.hpp"
#include "sre/problem.hpp"
#include "sre/relaxation.hpp"
#include "sre/round_elimination.hpp"
#include "sre/service.hpp"
#include "sre/solver.hpp"
#include "sre/zero_round.hpp"
