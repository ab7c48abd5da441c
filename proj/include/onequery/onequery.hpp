#pragma once

#include "onequery/algebra.hpp"
#include "onequery/algorithms.hpp"
#include "onequery/baselines.hpp"
#include "onequery/codes.hpp"
#include "onequery/costmodel.hpp"
#include "onequery/experiment.hpp"
#include "onequery/oracle.hpp"
#include "onequery/quantum.hpp"
