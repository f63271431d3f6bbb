#pragma once

#include "coherence.hpp"
#include "concurrency.hpp"
#include "cyc_matrix.hpp"
#include "cyclotomic.hpp"
#include "field_elimination.hpp"
#include "fp_linear.hpp"
#include "heisenberg.hpp"
#include "kernels.hpp"
#include "suites.hpp"
#include "symplectic.hpp"
#include "weil.hpp"
