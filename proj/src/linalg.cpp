#include "linkbench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "linkbench/rng.hpp"

namespace linkbench {

namespace {

void orthonormalize(std::vector<std::vector<double>>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double dot = std::inner_product(basis[i].begin(), basis[i].end(),
                                            basis[j].begin(), 0.0);
            for (std::size_t t = 0; t < basis[i].size(); ++t) basis[i][t] -= dot * basis[j][t];
        }
        double norm = std::sqrt(
            std::inner_product(basis[i].begin(), basis[i].end(), basis[i].begin(), 0.0));
        if (norm < 1e-14) {
            // degenerate direction; reseed deterministically
            Rng r(0x5eedba5eULL + i);
            for (double& x : basis[i]) x = r.real() - 0.5;
            norm = std::sqrt(
                std::inner_product(basis[i].begin(), basis[i].end(), basis[i].begin(), 0.0));
        }
        for (double& x : basis[i]) x /= norm;
    }
}

}  // namespace

EigenPairs top_eigenpairs(const MatVec& apply, std::size_t n, std::size_t k, double tol,
                          std::size_t max_iter, std::uint64_t seed) {
    if (k == 0 || k > n) throw NumericError("top_eigenpairs: invalid subspace size");
    Rng rng(seed);
    std::vector<std::vector<double>> basis(k, std::vector<double>(n));
    for (auto& v : basis)
        for (double& x : v) x = rng.real() - 0.5;
    orthonormalize(basis);

    std::vector<std::vector<double>> image(k, std::vector<double>(n));
    double worst_residual = 0.0;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < k; ++i) apply(basis[i].data(), image[i].data());

        // Rayleigh-Ritz on the current subspace
        std::vector<double> small(k * k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                small[i * k + j] = std::inner_product(basis[i].begin(), basis[i].end(),
                                                      image[j].begin(), 0.0);
        EigenPairs ritz = jacobi_eigensymm(small, k);

        std::vector<std::vector<double>> rotated(k, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const double c = ritz.vectors[i][j];
                for (std::size_t t = 0; t < n; ++t) rotated[i][t] += c * basis[j][t];
            }

        // residual check: ||A v - lambda v||
        worst_residual = 0.0;
        std::vector<double> av(n);
        EigenPairs result;
        for (std::size_t i = 0; i < k; ++i) {
            apply(rotated[i].data(), av.data());
            double lambda = std::inner_product(rotated[i].begin(), rotated[i].end(),
                                               av.begin(), 0.0);
            double res = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                const double d = av[t] - lambda * rotated[i][t];
                res += d * d;
            }
            res = std::sqrt(res);
            worst_residual = std::max(worst_residual, res);
            result.values.push_back(lambda);
            result.vectors.push_back(rotated[i]);
        }
        if (worst_residual <= tol) {
            std::vector<std::size_t> order(k);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::fabs(result.values[a]) > std::fabs(result.values[b]);
            });
            EigenPairs sorted;
            for (std::size_t i : order) {
                sorted.values.push_back(result.values[i]);
                sorted.vectors.push_back(std::move(result.vectors[i]));
            }
            return sorted;
        }

        // next iterate: A * rotated basis, re-orthonormalized
        for (std::size_t i = 0; i < k; ++i) apply(rotated[i].data(), basis[i].data());
        orthonormalize(basis);
    }
    throw NumericError("top_eigenpairs: no convergence, residual " +
                       std::to_string(worst_residual));
}

EigenPairs jacobi_eigensymm(std::vector<double> a, std::size_t n, std::size_t max_sweeps,
                            double tol) {
    if (a.size() != n * n) throw NumericError("jacobi_eigensymm: bad matrix size");
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (std::sqrt(off) <= tol) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p * n + i], aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i * n + p], viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
    EigenPairs out;
    for (std::size_t i : order) {
        out.values.push_back(a[i * n + i]);
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + i];
        out.vectors.push_back(std::move(col));
    }
    return out;
}

}  // namespace linkbench
