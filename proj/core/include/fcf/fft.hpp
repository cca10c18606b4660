#pragma once

#include "fcf/signal.hpp"

namespace fcf {

/// Unnormalized forward DFT, X(k) = sum_n x(n) e^{-j2pi kn/N}.
cvec fft(const cvec& x);

/// Unnormalized inverse transform (no 1/N), x(n) = sum_k X(k) e^{+j2pi kn/N}.
cvec ifft_unnormalized(const cvec& x);

/// Inverse DFT with the 1/N factor (the matrix inverse of fft()).
cvec ifft(const cvec& x);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

} // namespace fcf
