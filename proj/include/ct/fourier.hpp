#ifndef CT_FOURIER_HPP
#define CT_FOURIER_HPP

#include <vector>

namespace ct {

// Spectral calculus for smooth L-periodic samples on a uniform grid
// f[j] = f(j*L/n). Arbitrary n (FFTW backend).

// order-th derivative (order >= 1)
std::vector<double> spectral_derivative(const std::vector<double>& f, double L, int order = 1);

// Antiderivative F with F(0) = 0. F(s) = mean(f)*s + periodic part, so the
// returned samples are generally not periodic; the drift per period is
// mean(f)*L.
std::vector<double> spectral_antiderivative(const std::vector<double>& f, double L);

double mean(const std::vector<double>& f);

} // namespace ct

#endif
