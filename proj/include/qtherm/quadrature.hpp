#pragma once

#include <functional>

#include "qtherm/errors.hpp"

namespace qtherm {

struct QuadratureSpec {
    double tol = 1e-8;        // absolute target on the whole interval
    int max_evals = 200000;   // refinement budget; QuadratureFailure beyond
};

// Adaptive Simpson quadrature of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

} // namespace qtherm
