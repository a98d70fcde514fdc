#pragma once

#include "config.hpp"
#include "quadspace.hpp"
#include "charts.hpp"
#include "causality.hpp"
#include "invisible.hpp"
#include "isometry.hpp"
#include "groups.hpp"
#include "gauss.hpp"
