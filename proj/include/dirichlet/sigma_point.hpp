// SigmaPoint: a point sigma > 1/2 stored through the gap u = 2*sigma - 1.
//
// All interesting behaviour happens as sigma -> 1/2+, where storing sigma
// itself would throw away every significant digit of the gap.  u is the
// primary representation; sigma() is a derived convenience value.
#pragma once

#include <cmath>

#include "dirichlet/errors.hpp"

namespace dirichlet {

class SigmaPoint {
  public:
    // Construct from the gap u = 2*sigma - 1 (the native representation).
    static SigmaPoint from_u(double u) {
        if (!(u > 0) || !std::isfinite(u))
            throw Error(ErrorKind::argument, "sigma gap u must be positive and finite");
        return SigmaPoint(u);
    }

    // Convenience for "human" sigma values away from the abscissa.
    static SigmaPoint from_sigma(double sigma) {
        return from_u(2.0 * sigma - 1.0);
    }

    double u() const { return u_; }
    double sigma() const { return 0.5 + 0.5 * u_; }

    // 2*sigma, the exponent of the variance series sum n^(-2*sigma).
    double two_sigma() const { return 1.0 + u_; }

    bool operator==(const SigmaPoint& o) const { return u_ == o.u_; }
    bool operator!=(const SigmaPoint& o) const { return u_ != o.u_; }

  private:
    explicit SigmaPoint(double u) : u_(u) {}
    double u_;
};

} // namespace dirichlet
