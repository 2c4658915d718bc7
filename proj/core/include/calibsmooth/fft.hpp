#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "calibsmooth/kernel.hpp"

namespace calibsmooth {

namespace detail {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

std::size_t next_pow2(std::size_t n);

// Full linear convolution of two real sequences (length a+b-1).
std::vector<double> linear_convolve_fft(const std::vector<double>& a,
                                        const std::vector<double>& b);

// O(|a|*|b|) reference path, used when the output is short or for tests.
std::vector<double> linear_convolve_direct(const std::vector<double>& a,
                                           const std::vector<double>& b);

} // namespace detail

// Convolves `signal` with the kernel and returns the central slice of the
// same length as the input: out[i] = sum_d K(d) * signal[i-d], entries
// outside the signal treated as zero. Throws std::invalid_argument when
// the signal is shorter than the kernel support.
std::vector<double> fft_convolve(const std::vector<double>& signal,
                                 const DiscreteKernel& kernel);

} // namespace calibsmooth
