#include "qtherm/quadrature.hpp"

#include <cmath>

namespace qtherm {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    int evals = 0;
    int budget;

    double eval(double x)
    {
        if (++evals > budget)
            throw QuadratureFailure("integrate_adaptive: evaluation budget exceeded");
        return f(x);
    }
};

double simpson(double fa, double fm, double fb, double a, double b)
{
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = st.eval(lm), frm = st.eval(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (depth > 0 && std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    if (depth > 48)
        throw QuadratureFailure("integrate_adaptive: max recursion depth reached");
    return recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec)
{
    if (a == b) return 0.0;
    SimpsonState st{f, 0, spec.max_evals};
    const double fa = st.eval(a);
    const double m = 0.5 * (a + b);
    const double fm = st.eval(m);
    const double fb = st.eval(b);
    const double whole = simpson(fa, fm, fb, a, b);
    return recurse(st, a, b, fa, fm, fb, whole, spec.tol, 0);
}

} // namespace qtherm
