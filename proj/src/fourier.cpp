#include "ct/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace ct {

namespace {

// FFTW plan creation is not thread-safe; execution of a created plan is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct Workspace {
    std::vector<double> in;
    std::vector<std::complex<double>> freq;
    fftw_plan fwd;
    fftw_plan bwd;

    explicit Workspace(size_t n) : in(n), freq(n / 2 + 1) {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                   reinterpret_cast<fftw_complex*>(freq.data()), FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(freq.data()),
                                   in.data(), FFTW_ESTIMATE);
    }
    ~Workspace() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
};

} // namespace

double mean(const std::vector<double>& f) {
    return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
}

std::vector<double> spectral_derivative(const std::vector<double>& f, double L, int order) {
    const size_t n = f.size();
    if (n < 4) throw std::invalid_argument("spectral_derivative: need at least 4 samples");
    Workspace ws(n);
    ws.in = f;
    fftw_execute(ws.fwd);

    const double base = 2.0 * M_PI / L;
    const std::complex<double> I(0.0, 1.0);
    for (size_t k = 0; k < ws.freq.size(); ++k) {
        std::complex<double> factor = std::pow(I * (base * static_cast<double>(k)), order);
        // Nyquist mode of odd derivatives has no well-defined phase; zero it.
        if (n % 2 == 0 && k == n / 2 && order % 2 == 1) factor = 0.0;
        ws.freq[k] *= factor / static_cast<double>(n);
    }
    fftw_execute(ws.bwd);
    return ws.in;
}

std::vector<double> spectral_antiderivative(const std::vector<double>& f, double L) {
    const size_t n = f.size();
    if (n < 4) throw std::invalid_argument("spectral_antiderivative: need at least 4 samples");
    const double m = mean(f);

    Workspace ws(n);
    ws.in = f;
    fftw_execute(ws.fwd);

    const double base = 2.0 * M_PI / L;
    const std::complex<double> I(0.0, 1.0);
    ws.freq[0] = 0.0;
    for (size_t k = 1; k < ws.freq.size(); ++k) {
        ws.freq[k] /= I * (base * static_cast<double>(k)) * static_cast<double>(n);
    }
    if (n % 2 == 0) ws.freq[n / 2] = 0.0;
    fftw_execute(ws.bwd);

    std::vector<double> F(n);
    const double h = L / static_cast<double>(n);
    const double p0 = ws.in[0];
    for (size_t j = 0; j < n; ++j)
        F[j] = m * (h * static_cast<double>(j)) + (ws.in[j] - p0);
    return F;
}

} // namespace ct
