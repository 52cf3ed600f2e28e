#include "unfold/bvn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "unfold/errors.hpp"
#include "unfold/normal.hpp"

namespace unfold {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586;

// Gauss-Legendre abscissae/weights used by BVND: 6, 12 and 20 points.
constexpr double kX6[] = {-0.9324695142031522, -0.6612093864662647, -0.2386191860831970};
constexpr double kW6[] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr double kX12[] = {-0.9815606342467191, -0.9041172563704750, -0.7699026741943050,
                           -0.5873179542866171, -0.3678314989981802, -0.1252334085114692};
constexpr double kW12[] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                           0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr double kX20[] = {-0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
                           -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
                           -0.5108670019508271, -0.3737060887154196, -0.2277858511416451,
                           -0.07652652113349733};
constexpr double kW20[] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                           0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                           0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                           0.1527533871307259};

// Genz's BVND: P(X > dh, Y > dk) for standard bivariate normal, correlation r.
double bvnd(double dh, double dk, double r) {
  const double* x;
  const double* w;
  int ng;
  if (std::abs(r) < 0.3) {
    x = kX6, w = kW6, ng = 3;
  } else if (std::abs(r) < 0.75) {
    x = kX12, w = kW12, ng = 6;
  } else {
    x = kX20, w = kW20, ng = 10;
  }

  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;

  if (std::abs(r) < 0.925) {
    if (std::abs(r) > 0.0) {
      const double hs = 0.5 * (h * h + k * k);
      const double asr = std::asin(r);
      for (int i = 0; i < ng; ++i) {
        for (int is = -1; is <= 1; is += 2) {
          const double sn = std::sin(asr * (is * x[i] + 1.0) / 2.0);
          bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
      }
      bvn *= asr / (2.0 * kTwoPi);
    }
    bvn += std_normal_cdf(-h) * std_normal_cdf(-k);
    return bvn;
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0) {
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    }
    if (-hk < 100.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * std_normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (int i = 0; i < ng; ++i) {
      for (int is = -1; is <= 1; is += 2) {
        const double xs = a * (is * x[i] + 1.0) * (a * (is * x[i] + 1.0));
        const double rs = std::sqrt(1.0 - xs);
        asr = -(bs / xs + hk) / 2.0;
        if (asr > -100.0) {
          bvn += a * w[i] * std::exp(asr) *
                 (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                  (1.0 + c * xs * (1.0 + d * xs)));
        }
      }
    }
    bvn = -bvn / kTwoPi;
  }
  if (r > 0.0) {
    bvn += std_normal_cdf(-std::max(h, k));
  } else {
    bvn = -bvn;
    if (k > h) bvn += std_normal_cdf(k) - std_normal_cdf(h);
  }
  return bvn;
}

}  // namespace

double bvn_cdf(double x, double y, double rho) {
  if (std::isnan(x) || std::isnan(y) || !(rho > -1.0 && rho < 1.0)) {
    throw invalid_parameter_error("bvn_cdf: NaN argument or |rho| >= 1");
  }
  if (x == -kInf || y == -kInf) return 0.0;
  if (x == kInf && y == kInf) return 1.0;
  if (x == kInf) return std_normal_cdf(y);
  if (y == kInf) return std_normal_cdf(x);
  return std::clamp(bvnd(-x, -y, rho), 0.0, 1.0);
}

double bvn_response_cdf(double a, double b) {
  return bvn_cdf(a / kSqrt2, b / kSqrt2, 0.5);
}

}  // namespace unfold
