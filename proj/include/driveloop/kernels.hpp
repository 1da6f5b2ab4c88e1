#pragma once

#include <cstddef>
#include <string_view>

// Dense double-precision inner loops used by the policy and decoder math.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. Both variants are equivalence
// tested against each other. Results are deterministic for a fixed backend.
namespace driveloop::kernels {

enum class Backend { Scalar, Avx2 };

struct Ops {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = W x (+ b). W row-major m x n; b may be null.
  void (*matvec)(const double* w, const double* x, const double* b, double* y,
                 std::size_t m, std::size_t n);
  // dx = W^T dy. W row-major m x n, dy length m, dx length n (overwritten).
  void (*matvec_t)(const double* w, const double* dy, double* dx, std::size_t m,
                   std::size_t n);
  // W += alpha * u v^T. u length m, v length n.
  void (*outer_acc)(double alpha, const double* u, const double* v, double* w,
                    std::size_t m, std::size_t n);
};

extern const Ops kScalarOps;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops kAvx2Ops;
#endif

bool avx2_supported();

// Active table. Default: AVX2 when supported, else scalar. The environment
// variable DRIVELOOP_KERNELS=scalar|avx2 overrides at startup.
const Ops& ops();
Backend active_backend();
std::string_view backend_name(Backend b);

// Test hook; throws ConfigError when the requested backend is unavailable.
void force_backend(Backend b);

}  // namespace driveloop::kernels
