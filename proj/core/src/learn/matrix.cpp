#include "lobarena/learn/matrix.hpp"

#include <algorithm>
#include <cstring>

#include "lobarena/util/error.hpp"

namespace lobarena::learn {
namespace {

// Cache blocking: a KC x JC panel of B stays in L2 while MR-row strips of A
// stream through it. The 4x32 micro kernel keeps its accumulators in
// registers; the j loop vectorizes.
constexpr std::size_t KC = 256;
constexpr std::size_t JC = 512;
constexpr std::size_t MR = 4;
constexpr std::size_t NR = 32;

void kernel_4x32(const double* __restrict a, std::size_t kc,
                 const double* __restrict b, std::size_t ldb,
                 double* __restrict c, std::size_t ldc) {
  double acc[MR][NR] = {};
  for (std::size_t k = 0; k < kc; ++k) {
    const double* __restrict brow = b + k * ldb;
    const double a0 = a[0 * KC + k];
    const double a1 = a[1 * KC + k];
    const double a2 = a[2 * KC + k];
    const double a3 = a[3 * KC + k];
    for (std::size_t j = 0; j < NR; ++j) {
      const double bv = brow[j];
      acc[0][j] += a0 * bv;
      acc[1][j] += a1 * bv;
      acc[2][j] += a2 * bv;
      acc[3][j] += a3 * bv;
    }
  }
  for (std::size_t r = 0; r < MR; ++r) {
    double* __restrict crow = c + r * ldc;
    for (std::size_t j = 0; j < NR; ++j) crow[j] += acc[r][j];
  }
}

void kernel_edge(const double* __restrict a, std::size_t kc,
                 const double* __restrict b, std::size_t ldb,
                 double* __restrict c, std::size_t ldc, std::size_t mr,
                 std::size_t nr) {
  for (std::size_t r = 0; r < mr; ++r) {
    const double* __restrict arow = a + r * KC;
    double* __restrict crow = c + r * ldc;
    for (std::size_t k = 0; k < kc; ++k) {
      const double av = arow[k];
      const double* __restrict brow = b + k * ldb;
      for (std::size_t j = 0; j < nr; ++j) crow[j] += av * brow[j];
    }
  }
}

// Element accessors for the logical (possibly transposed) operands.
struct View {
  const double* base;
  std::size_t ld;
  bool trans;
  double at(std::size_t r, std::size_t c) const {
    return trans ? base[c * ld + r] : base[r * ld + c];
  }
};

void gemm_impl(const View& a, const View& b, double* c, std::size_t ldc,
               std::size_t m, std::size_t n, std::size_t k, bool accumulate) {
  if (!accumulate) {
    for (std::size_t r = 0; r < m; ++r) std::memset(c + r * ldc, 0, n * sizeof(double));
  }
  if (m == 0 || n == 0 || k == 0) return;

  thread_local std::vector<double> bpack;
  thread_local std::vector<double> apack;
  bpack.resize(KC * JC);
  apack.resize(MR * KC);

  for (std::size_t k0 = 0; k0 < k; k0 += KC) {
    const std::size_t kc = std::min(KC, k - k0);
    for (std::size_t j0 = 0; j0 < n; j0 += JC) {
      const std::size_t jc = std::min(JC, n - j0);
      // Pack the B panel row-major with leading dimension jc.
      if (!b.trans) {
        for (std::size_t kk = 0; kk < kc; ++kk) {
          std::memcpy(bpack.data() + kk * jc, b.base + (k0 + kk) * b.ld + j0,
                      jc * sizeof(double));
        }
      } else {
        for (std::size_t kk = 0; kk < kc; ++kk) {
          double* dst = bpack.data() + kk * jc;
          for (std::size_t jj = 0; jj < jc; ++jj) {
            dst[jj] = b.base[(j0 + jj) * b.ld + (k0 + kk)];
          }
        }
      }
      for (std::size_t i0 = 0; i0 < m; i0 += MR) {
        const std::size_t mr = std::min(MR, m - i0);
        if (!a.trans) {
          for (std::size_t rr = 0; rr < mr; ++rr) {
            std::memcpy(apack.data() + rr * KC, a.base + (i0 + rr) * a.ld + k0,
                        kc * sizeof(double));
          }
        } else {
          for (std::size_t rr = 0; rr < mr; ++rr) {
            double* dst = apack.data() + rr * KC;
            for (std::size_t kk = 0; kk < kc; ++kk) {
              dst[kk] = a.base[(k0 + kk) * a.ld + (i0 + rr)];
            }
          }
        }
        std::size_t j = 0;
        if (mr == MR) {
          for (; j + NR <= jc; j += NR) {
            kernel_4x32(apack.data(), kc, bpack.data() + j, jc,
                        c + i0 * ldc + j0 + j, ldc);
          }
        }
        if (j < jc) {
          kernel_edge(apack.data(), kc, bpack.data() + j, jc,
                      c + i0 * ldc + j0 + j, ldc, mr, jc - j);
        }
      }
    }
  }
}

void check_shapes(std::size_t am, std::size_t ak, std::size_t bk, std::size_t bn,
                  const Matrix& c, const char* what) {
  if (ak != bk) {
    throw Error("gemm ", what, ": inner dimensions differ (", ak, " vs ", bk, ")");
  }
  if (c.rows() != am || c.cols() != bn) {
    throw Error("gemm ", what, ": output is ", c.rows(), "x", c.cols(),
                ", expected ", am, "x", bn);
  }
}

}  // namespace

void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  check_shapes(a.rows(), a.cols(), b.rows(), b.cols(), c, "nn");
  gemm_impl({a.data(), a.cols(), false}, {b.data(), b.cols(), false}, c.data(),
            c.cols(), a.rows(), b.cols(), a.cols(), accumulate);
}

void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  check_shapes(a.rows(), a.cols(), b.cols(), b.rows(), c, "nt");
  gemm_impl({a.data(), a.cols(), false}, {b.data(), b.cols(), true}, c.data(),
            c.cols(), a.rows(), b.rows(), a.cols(), accumulate);
}

void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  check_shapes(a.cols(), a.rows(), b.rows(), b.cols(), c, "tn");
  gemm_impl({a.data(), a.cols(), true}, {b.data(), b.cols(), false}, c.data(),
            c.cols(), a.cols(), b.cols(), a.rows(), accumulate);
}

}  // namespace lobarena::learn
