#pragma once

#include "mqf/error.hpp"
#include "mqf/rational.hpp"
#include "mqf/field.hpp"
#include "mqf/interval.hpp"
#include "mqf/integers.hpp"
#include "mqf/lattice_walk.hpp"
#include "mqf/indecomposables.hpp"
#include "mqf/certifier.hpp"
#include "mqf/cf_quadratic.hpp"
#include "mqf/sampling.hpp"
#include "mqf/tower.hpp"
#include "mqf/expr.hpp"
#include "mqf/json_io.hpp"
#include "mqf/verify.hpp"
