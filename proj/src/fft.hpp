#pragma once

#include <complex>
#include <span>

namespace fekdisc::detail {

// Thin FFTW front end.  Plans are created once per length and shared;
// execution is thread-safe.  Conventions follow FFTW: forward uses e^{-2πijk/M},
// backward is unnormalized.

// out has length M/2+1.
void fft_r2c(std::span<const double> in, std::span<std::complex<double>> out);

// in has length M/2+1 and is not modified; out has length M.
void fft_c2r(std::span<const std::complex<double>> in, std::span<double> out);

void fft_c2c_forward(std::span<const std::complex<double>> in,
                     std::span<std::complex<double>> out);

}  // namespace fekdisc::detail
