#pragma once

#include "qwalk/linalg.hpp"
#include "qwalk/random.hpp"
#include "qwalk/statevec.hpp"
#include "qwalk/walk.hpp"
#include "qwalk/analysis.hpp"
#include "qwalk/recipes.hpp"
#include "qwalk/qss.hpp"
#include "qwalk/serialize.hpp"
#include "qwalk/emit.hpp"
