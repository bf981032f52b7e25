#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "prosyn/error.hpp"
#include "prosyn/lmm.hpp"

namespace prosyn {

double chi_square_sf(double x, double df) {
  if (!(df > 0)) throw Error("chi_square_sf: degrees of freedom must be positive");
  if (std::isnan(x)) throw Error("chi_square_sf: NaN statistic");
  if (x <= 0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace prosyn
