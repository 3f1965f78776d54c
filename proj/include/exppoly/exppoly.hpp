#pragma once

// Exponential-polynomial algebra, classification of the solution families of
// f'(f - L(f)) = phi (f - a)(f - b) for constant-coefficient L, and numeric
// cross-checks (pointwise residual sampling, argument-principle zero counts).

#include "exppoly/classify.hpp"
#include "exppoly/expsum.hpp"
#include "exppoly/numeric.hpp"
#include "exppoly/ode.hpp"
#include "exppoly/oracle.hpp"
#include "exppoly/poly.hpp"
