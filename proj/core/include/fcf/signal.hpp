#pragma once

#include <complex>
#include <vector>

#include "fcf/rational.hpp"

namespace fcf {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

/// Complex baseband sample vector plus its sampling rate.
struct ComplexSignal {
    cvec samples;
    Rational rate_hz{0};
};

inline double energy(const cvec& v) {
    double e = 0.0;
    for (const auto& s : v) e += std::norm(s);
    return e;
}

inline double mean_power(const cvec& v) {
    return v.empty() ? 0.0 : energy(v) / static_cast<double>(v.size());
}

} // namespace fcf
