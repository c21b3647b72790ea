#pragma once

#include <functional>

namespace qem
{
struct RootResult
{
    double root = 0;
    double bisection_root = 0;  //!< before Newton polishing
    double residual = 0;
};

/*!
 * Bracketed bisection followed by Newton polishing.
 *
 * Throws NumericError if the bracket does not change sign or Newton
 * leaves the bracket.
 */
RootResult bisect_newton(std::function<double(double)> const& f,
                         std::function<double(double)> const& dfdx,
                         double lo,
                         double hi);

}  // namespace qem
