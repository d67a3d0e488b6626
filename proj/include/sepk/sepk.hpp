#pragma once

#include "sepk/error.hpp"
#include "sepk/graph.hpp"
#include "sepk/graph_io.hpp"
#include "sepk/int_matrix.hpp"
#include "sepk/transform.hpp"
#include "sepk/ktheory.hpp"
#include "sepk/formal_star.hpp"
