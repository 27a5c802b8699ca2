#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

// All LAPACK/BLAS traffic goes through this header so the complex type
// mapping (lapack_complex_double = std::complex<double>) is defined exactly
// once, before lapacke.h is seen anywhere.
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" {
// Fortran BLAS entry point; complex arguments passed as opaque pointers.
void zgemv_(const char* trans, const int* m, const int* n, const void* alpha,
            const void* a, const int* lda, const void* x, const int* incx,
            const void* beta, void* y, const int* incy);
}

namespace ptrig::detail {

// y = op(A) x for a column-major m-by-n matrix; trans is 'N' or 'C'.
inline void gemv(char trans, int m, int n,
                 const std::complex<double>* a,
                 const std::complex<double>* x, std::complex<double>* y) {
  const std::complex<double> one{1.0, 0.0};
  const std::complex<double> zero{0.0, 0.0};
  const int inc = 1;
  zgemv_(&trans, &m, &n, &one, a, &m, x, &inc, &zero, y, &inc);
}

// Eigenvalues (ascending) of a Hermitian column-major matrix; destroys `a`.
inline std::vector<double> hermitian_eigenvalues(
    std::vector<std::complex<double>>& a, int dim) {
  std::vector<double> eigenvalues(static_cast<std::size_t>(dim));
  const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', dim, a.data(),
                                  dim, eigenvalues.data());
  if (info != 0)
    throw std::runtime_error("hermitian_eigenvalues: LAPACK zheevd failed");
  return eigenvalues;
}

// Solves the square dense system A x = b in place (b becomes x); destroys A.
inline void dense_solve_inplace(std::vector<std::complex<double>>& a,
                                std::vector<std::complex<double>>& b, int dim) {
  std::vector<lapack_int> pivots(static_cast<std::size_t>(dim));
  const int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, dim, 1, a.data(), dim,
                                 pivots.data(), b.data(), dim);
  if (info != 0)
    throw std::runtime_error("dense_solve_inplace: LAPACK zgesv failed");
}

// Eigenvalues (ascending) of a real symmetric tridiagonal matrix given by
// its diagonal and subdiagonal; inputs are copied, not clobbered.
inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                                   std::vector<double> sub) {
  const int dim = static_cast<int>(diag.size());
  if (dim <= 1) return diag;
  const int info =
      LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', dim, diag.data(), sub.data(),
                    nullptr, dim);
  if (info != 0)
    throw std::runtime_error("tridiagonal_eigenvalues: LAPACK dstev failed");
  return diag;
}

}  // namespace ptrig::detail
