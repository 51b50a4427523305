#pragma once

#include "pwk/composition.hpp"
#include "pwk/decomposition.hpp"
#include "pwk/error.hpp"
#include "pwk/graph.hpp"
#include "pwk/io.hpp"
#include "pwk/kernel.hpp"
#include "pwk/reduction.hpp"
#include "pwk/width.hpp"
