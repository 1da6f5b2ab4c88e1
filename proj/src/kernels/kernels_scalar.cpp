#include "driveloop/kernels.hpp"

namespace driveloop::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* w, const double* x, const double* b, double* y,
                   std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double acc = b ? b[i] : 0.0;
    const double* row = w + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_t_scalar(const double* w, const double* dy, double* dx, std::size_t m,
                     std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) dx[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = w + i * n;
    double d = dy[i];
    for (std::size_t j = 0; j < n; ++j) dx[j] += d * row[j];
  }
}

void outer_acc_scalar(double alpha, const double* u, const double* v, double* w,
                      std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double au = alpha * u[i];
    double* row = w + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] += au * v[j];
  }
}

}  // namespace

const Ops kScalarOps = {dot_scalar, axpy_scalar, matvec_scalar, matvec_t_scalar,
                        outer_acc_scalar};

}  // namespace driveloop::kernels
