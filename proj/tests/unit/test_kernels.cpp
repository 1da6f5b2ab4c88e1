#include <doctest.h>

#include <cmath>
#include <vector>

#include "driveloop/kernels.hpp"
#include "driveloop/rng.hpp"

using namespace driveloop;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-11 * std::max(1.0, scale);
}

}  // namespace

// The AVX2 and scalar paths must agree to rounding noise on every size,
// including remainders around the 4-lane width.
#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("kernel backends are equivalent") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not available; scalar-only host");
    return;
  }
  const kernels::Ops& scalar = kernels::kScalarOps;
  const kernels::Ops& avx2 = kernels::kAvx2Ops;
  Rng rng(1234);

  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 33u, 64u, 67u, 128u}) {
    auto a = random_vec(n, rng);
    auto b = random_vec(n, rng);
    CHECK(close(scalar.dot(a.data(), b.data(), n), avx2.dot(a.data(), b.data(), n),
                static_cast<double>(n)));

    auto y1 = random_vec(n, rng);
    auto y2 = y1;
    scalar.axpy(0.37, a.data(), y1.data(), n);
    avx2.axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-12));
  }

  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 1}, {3, 5}, {7, 13}, {16, 16}, {31, 64}, {64, 77}}) {
    auto w = random_vec(m * n, rng);
    auto x = random_vec(n, rng);
    auto bias = random_vec(m, rng);
    std::vector<double> ys(m), ya(m);
    scalar.matvec(w.data(), x.data(), bias.data(), ys.data(), m, n);
    avx2.matvec(w.data(), x.data(), bias.data(), ya.data(), m, n);
    for (std::size_t i = 0; i < m; ++i) CHECK(close(ys[i], ya[i], static_cast<double>(n)));

    auto dy = random_vec(m, rng);
    std::vector<double> dxs(n), dxa(n);
    scalar.matvec_t(w.data(), dy.data(), dxs.data(), m, n);
    avx2.matvec_t(w.data(), dy.data(), dxa.data(), m, n);
    for (std::size_t j = 0; j < n; ++j) CHECK(close(dxs[j], dxa[j], static_cast<double>(m)));

    auto ws = random_vec(m * n, rng);
    auto wa = ws;
    auto u = random_vec(m, rng);
    auto v = random_vec(n, rng);
    scalar.outer_acc(0.9, u.data(), v.data(), ws.data(), m, n);
    avx2.outer_acc(0.9, u.data(), v.data(), wa.data(), m, n);
    for (std::size_t i = 0; i < m * n; ++i) CHECK(close(ws[i], wa[i], 4.0));
  }
}
#endif

TEST_CASE("matvec reference values") {
  // 2x3 matrix times vector, by hand.
  std::vector<double> w = {1, 2, 3, 4, 5, 6};
  std::vector<double> x = {1, -1, 2};
  std::vector<double> b = {0.5, -0.5};
  std::vector<double> y(2);
  kernels::ops().matvec(w.data(), x.data(), b.data(), y.data(), 2, 3);
  CHECK(y[0] == doctest::Approx(1 - 2 + 6 + 0.5));
  CHECK(y[1] == doctest::Approx(4 - 5 + 12 - 0.5));

  std::vector<double> dy = {1.0, -2.0};
  std::vector<double> dx(3);
  kernels::ops().matvec_t(w.data(), dy.data(), dx.data(), 2, 3);
  CHECK(dx[0] == doctest::Approx(1 - 8));
  CHECK(dx[1] == doctest::Approx(2 - 10));
  CHECK(dx[2] == doctest::Approx(3 - 12));
}

TEST_CASE("backend forcing and dispatch") {
  kernels::Backend original = kernels::active_backend();
  kernels::force_backend(kernels::Backend::Scalar);
  CHECK(kernels::active_backend() == kernels::Backend::Scalar);
  std::vector<double> a = {1, 2}, b = {3, 4};
  CHECK(kernels::ops().dot(a.data(), b.data(), 2) == doctest::Approx(11.0));
  if (kernels::avx2_supported()) {
    kernels::force_backend(kernels::Backend::Avx2);
    CHECK(kernels::active_backend() == kernels::Backend::Avx2);
    CHECK(kernels::ops().dot(a.data(), b.data(), 2) == doctest::Approx(11.0));
  }
  kernels::force_backend(original);
}
