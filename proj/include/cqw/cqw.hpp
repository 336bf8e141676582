#pragma once

#include "cqw/angle.hpp"
#include "cqw/bloch.hpp"
#include "cqw/disorder.hpp"
#include "cqw/edge.hpp"
#include "cqw/error.hpp"
#include "cqw/io.hpp"
#include "cqw/oracle.hpp"
#include "cqw/parallel.hpp"
#include "cqw/topology.hpp"
#include "cqw/walk.hpp"
