#pragma once

#include <complex>

namespace ulcnet {

// In-place iterative radix-2 transform, double precision.  n must be a power
// of two.  inverse=true applies the 1/n scale.
void fft(std::complex<double>* a, int n, bool inverse);

// Forward transform of n real samples into n/2+1 bins.  scratch must hold n
// complex values; callers keep it preallocated so the streaming path never
// allocates.
void rfft(const double* in, int n, std::complex<double>* scratch,
          float* out_re, float* out_im);

// Inverse of rfft: n/2+1 bins back to n real samples.  The spectrum is
// extended Hermitian-symmetrically; any non-symmetric residue (e.g. from a
// complex mask acting on DC/Nyquist) is discarded with the imaginary part.
void irfft(const float* in_re, const float* in_im, int n,
           std::complex<double>* scratch, double* out);

}  // namespace ulcnet
