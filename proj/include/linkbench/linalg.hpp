#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "linkbench/types.hpp"

namespace linkbench {

/// y = A x for a symmetric operator of dimension n.
using MatVec = std::function<void(const double* x, double* y)>;

struct EigenPairs {
    std::vector<double> values;                // sorted by decreasing |value|
    std::vector<std::vector<double>> vectors;  // orthonormal, vectors[i] pairs values[i]
};

/// Dominant eigenpairs of a symmetric operator by orthogonal (subspace)
/// iteration with Rayleigh-Ritz extraction. Throws NumericError with the
/// worst residual norm if convergence fails.
EigenPairs top_eigenpairs(const MatVec& apply, std::size_t n, std::size_t k,
                          double tol = 1e-10, std::size_t max_iter = 5000,
                          std::uint64_t seed = 1);

/// Full eigendecomposition of a dense symmetric matrix (row-major, n*n) by
/// cyclic Jacobi rotations. Pairs are sorted by decreasing eigenvalue.
EigenPairs jacobi_eigensymm(std::vector<double> a, std::size_t n,
                            std::size_t max_sweeps = 100, double tol = 1e-13);

}  // namespace linkbench
