#include "codedet/kernels.hpp"

namespace codedet::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_gather_scalar(const double* dense, const std::uint32_t* idx,
                         const double* val, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += dense[idx[i]] * val[i];
    return acc;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scatter_axpy_scalar(double* dense, double a, const std::uint32_t* idx,
                         const double* val, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dense[idx[i]] += a * val[i];
}

void scale_scalar(double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum_squares_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend backend{
        "scalar",          dot_scalar,   dot_gather_scalar,
        axpy_scalar,       scatter_axpy_scalar,
        scale_scalar,      sum_squares_scalar,
    };
    return backend;
}

}  // namespace codedet::kernels
