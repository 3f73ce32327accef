#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace codedet::kernels {

// Data-parallel primitives behind the featurizer and the linear model.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. Both variants are
// equivalence-tested against each other. Summation order differs between
// backends, so reductions may differ by a few ulps.
//
// scatter_axpy is scalar in every backend: AVX2 has gathers but no scatter,
// and a gather/extract emulation loses to the plain loop.

struct Backend {
    const char* name;

    // sum(a[i] * b[i])
    double (*dot)(const double* a, const double* b, std::size_t n);

    // sum(dense[idx[i]] * val[i]) — sparse vector against a dense row.
    double (*dot_gather)(const double* dense, const std::uint32_t* idx,
                         const double* val, std::size_t n);

    // y[i] += a * x[i]
    void (*axpy)(double* y, double a, const double* x, std::size_t n);

    // dense[idx[i]] += a * val[i]; indices must be distinct.
    void (*scatter_axpy)(double* dense, double a, const std::uint32_t* idx,
                         const double* val, std::size_t n);

    // x[i] *= a
    void (*scale)(double* x, double a, std::size_t n);

    // sum(x[i]^2)
    double (*sum_squares)(const double* x, std::size_t n);
};

const Backend& scalar_backend();

#if defined(__x86_64__) || defined(_M_X64)
// Only callable when cpu_has_avx2() reports true.
const Backend& avx2_backend();
bool cpu_has_avx2();
#endif

// Active backend. Defaults to the best the CPU supports; the environment
// variable CODEDET_KERNELS=scalar|avx2 overrides at startup.
const Backend& active();

// Force a backend by name; returns false if unavailable on this machine.
bool select_backend(std::string_view name);

inline double dot(const double* a, const double* b, std::size_t n) {
    return active().dot(a, b, n);
}
inline double dot_gather(const double* dense, const std::uint32_t* idx,
                         const double* val, std::size_t n) {
    return active().dot_gather(dense, idx, val, n);
}
inline void axpy(double* y, double a, const double* x, std::size_t n) {
    active().axpy(y, a, x, n);
}
inline void scatter_axpy(double* dense, double a, const std::uint32_t* idx,
                         const double* val, std::size_t n) {
    active().scatter_axpy(dense, a, idx, val, n);
}
inline void scale(double* x, double a, std::size_t n) {
    active().scale(x, a, n);
}
inline double sum_squares(const double* x, std::size_t n) {
    return active().sum_squares(x, n);
}

}  // namespace codedet::kernels
