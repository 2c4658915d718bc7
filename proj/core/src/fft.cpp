#include "calibsmooth/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace calibsmooth {

namespace detail {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        // The multiplicative twiddle recurrence drifts ~k*ulp; resync with
        // exact trig often enough to keep the transform near machine
        // accuracy at large sizes.
        if ((k & 63) == 0) {
          const double phase = angle * static_cast<double>(k);
          w = {std::cos(phase), std::sin(phase)};
        }
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv_n;
  }
}

std::vector<double> linear_convolve_fft(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);

  // Pack both real inputs into one complex FFT: z = a + i*b, then
  // A(k) = (Z(k) + conj(Z(n-k)))/2, B(k) = (Z(k) - conj(Z(n-k)))/(2i).
  std::vector<std::complex<double>> z(n, {0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) z[i].real(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) z[i].imag(b[i]);
  fft_radix2(z, false);

  std::vector<std::complex<double>> prod(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t kr = (n - k) & (n - 1);
    std::complex<double> zk = z[k];
    std::complex<double> zr = std::conj(z[kr]);
    std::complex<double> ak = 0.5 * (zk + zr);
    std::complex<double> bk = std::complex<double>(0.0, -0.5) * (zk - zr);
    prod[k] = ak * bk;
  }
  fft_radix2(prod, true);

  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = prod[i].real();
  return out;
}

std::vector<double> linear_convolve_direct(const std::vector<double>& a,
                                           const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

} // namespace detail

std::vector<double> fft_convolve(const std::vector<double>& signal,
                                 const DiscreteKernel& kernel) {
  if (signal.size() < kernel.support()) {
    throw std::invalid_argument("fft_convolve: signal shorter than kernel support");
  }
  std::vector<double> full = detail::linear_convolve_fft(signal, kernel.weights);
  // Central slice: out[i] corresponds to the kernel centered on signal[i].
  const std::size_t offset = static_cast<std::size_t>(kernel.radius);
  return std::vector<double>(full.begin() + offset, full.begin() + offset + signal.size());
}

} // namespace calibsmooth
