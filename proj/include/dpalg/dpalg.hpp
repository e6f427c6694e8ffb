/// @file dpalg.hpp
/// @brief Umbrella header for the library (everything except the CLI).
#pragma once

#include "dpalg/axioms.hpp"
#include "dpalg/beck.hpp"
#include "dpalg/coeff.hpp"
#include "dpalg/dpcore.hpp"
#include "dpalg/envelope.hpp"
#include "dpalg/expr.hpp"
#include "dpalg/json_io.hpp"
#include "dpalg/kahler.hpp"
#include "dpalg/linalg.hpp"
#include "dpalg/oracle.hpp"
#include "dpalg/report.hpp"
