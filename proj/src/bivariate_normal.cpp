#include "netpsych/bivariate_normal.hpp"

#include <algorithm>
#include <cmath>

#include "netpsych/distributions.hpp"

namespace netpsych {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

// Half of the symmetric Gauss-Legendre rules on [-1, 1].
const double kW6[] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910};
const double kX6[] = {0.9324695142031521, 0.6612093864662645, 0.2386191860831969};

const double kW12[] = {0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
                       0.2031674267230659, 0.2334925365383548, 0.2491470458134028};
const double kX12[] = {0.9815606342467192, 0.9041172563704749, 0.7699026741943047,
                       0.5873179542866175, 0.3678314989981802, 0.1252334085114689};

const double kW20[] = {0.0176140071391521, 0.0406014298003869, 0.0626720483341091,
                       0.0832767415767048, 0.1019301198172404, 0.1181945319615184,
                       0.1316886384491766, 0.1420961093183820, 0.1491729864726037,
                       0.1527533871307258};
const double kX20[] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                       0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                       0.5108670019508271, 0.3737060887154195, 0.2277858511416451,
                       0.0765265211334973};

}  // namespace

double bvn_upper(double dh, double dk, double r) {
    const double* w;
    const double* x;
    int ng;
    if (std::fabs(r) < 0.3) {
        w = kW6; x = kX6; ng = 3;
    } else if (std::fabs(r) < 0.75) {
        w = kW12; x = kX12; ng = 6;
    } else {
        w = kW20; x = kX20; ng = 10;
    }

    double h = dh;
    double k = dk;
    double hk = h * k;
    double bvn = 0.0;

    if (std::fabs(r) < 0.925) {
        if (std::fabs(r) > 0.0) {
            double hs = (h * h + k * k) / 2.0;
            double asr = std::asin(r);
            for (int i = 0; i < ng; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    double sn = std::sin(asr * (is * x[i] + 1.0) / 2.0);
                    bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn = bvn * asr / (2.0 * kTwoPi);
        }
        bvn += norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (std::fabs(r) < 1.0) {
            double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            double bs = (h - k) * (h - k);
            double c = (4.0 - hk) / 8.0;
            double d = (12.0 - hk) / 16.0;
            double asr = -(bs / as + hk) / 2.0;
            if (asr > -100.0) {
                bvn = a * std::exp(asr) *
                      (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
                       c * d * as * as / 5.0);
            }
            if (-hk < 100.0) {
                double b = std::sqrt(bs);
                bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * norm_cdf(-b / a) * b *
                       (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for (int i = 0; i < ng; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    double xi = a * (is * x[i] + 1.0);
                    double xs = xi * xi;
                    double rs = std::sqrt(1.0 - xs);
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
            bvn += norm_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

double bvn_cdf(double h, double k, double rho) { return bvn_upper(-h, -k, rho); }

}  // namespace netpsych
