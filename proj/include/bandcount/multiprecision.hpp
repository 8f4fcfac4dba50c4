#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace bandcount {

/// 64 decimal digits: enough to resolve reference-subtracted splittings down to
/// 1e-50 h on lattices of a few thousand nodes.
using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<64>,
                                              boost::multiprecision::et_off>;

}  // namespace bandcount
