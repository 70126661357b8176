// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/geom/faces.hpp"
#include "polyref/geom/hyperplane.hpp"
#include "polyref/geom/polytope.hpp"
#include "polyref/geom/primitives.hpp"
#include "polyref/geom/scatterer.hpp"
