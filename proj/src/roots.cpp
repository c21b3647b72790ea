#include "qem/roots.hpp"

#include <cmath>

#include "qem/errors.hpp"

namespace qem
{
RootResult bisect_newton(std::function<double(double)> const& f,
                         std::function<double(double)> const& dfdx,
                         double lo,
                         double hi)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (!(flo * fhi < 0))
        throw NumericError("root bracket does not change sign");

    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter)
    {
        double mid = 0.5 * (lo + hi);
        double fmid = f(mid);
        if (fmid == 0)
        {
            lo = hi = mid;
            break;
        }
        if ((fmid < 0) == (flo < 0))
        {
            lo = mid;
            flo = fmid;
        }
        else
        {
            hi = mid;
        }
    }
    RootResult result;
    result.bisection_root = 0.5 * (lo + hi);

    double x = result.bisection_root;
    for (int iter = 0; iter < 20; ++iter)
    {
        double step = f(x) / dfdx(x);
        x -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x)))
            break;
    }
    if (std::abs(x - result.bisection_root) > 1e-8)
        throw NumericError("Newton polishing diverged from bracket");
    result.root = x;
    result.residual = f(x);
    return result;
}

}  // namespace qem
