#include "iwpca/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iwpca {
namespace {

// Cyclic Jacobi with fixed (p, q) sweep order. Converges when the
// off-diagonal Frobenius mass drops below 1e-12 relative to the input.
void jacobi_eig(DenseMatrix A, std::vector<double>& eigenvalues, DenseMatrix& V) {
    const std::size_t n = A.rows();
    V = DenseMatrix::identity(n);
    const double scale = std::max(1.0, std::sqrt(frobenius_norm_sq(A)));
    const double tol = 1e-12 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += 2.0 * A(p, q) * A(p, q);
        if (std::sqrt(off) <= tol) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = A(p, p), aqq = A(q, q);
                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(p, k) = A(k, p);
                    A(k, q) = s * akp + c * akq;
                    A(q, k) = A(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = A(i, i);
}

double hypot2(double x, double y) { return std::sqrt(x * x + y * y); }

// Householder reduction to tridiagonal form, accumulating the transform
// in V. Classic EISPACK tred2.
void tred2(DenseMatrix& V, std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(V.rows());
    for (int j = 0; j < n; ++j) d[j] = V(n - 1, j);

    for (int i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (int k = 0; k < i; ++k) scale += std::fabs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
                V(j, i) = 0.0;
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) e[j] = 0.0;

            for (int j = 0; j < i; ++j) {
                f = d[j];
                V(j, i) = f;
                g = e[j] + V(j, j) * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += V(k, j) * d[k];
                    e[k] += V(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k)
                    V(k, j) -= (f * e[k] + g * d[k]);
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (int i = 0; i < n - 1; ++i) {
        V(n - 1, i) = V(i, i);
        V(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
            for (int j = 0; j <= i; ++j) {
                double g = 0.0;
                for (int k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
                for (int k = 0; k <= i; ++k) V(k, j) -= g * d[k];
            }
        }
        for (int k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
    }
    for (int j = 0; j < n; ++j) {
        d[j] = V(n - 1, j);
        V(n - 1, j) = 0.0;
    }
    V(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Symmetric tridiagonal QL with implicit shifts. Classic EISPACK tql2.
void tql2(DenseMatrix& V, std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(V.rows());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0, tst1 = 0.0;
    const double eps = std::pow(2.0, -52.0);
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        int m = l;
        while (m < n) {
            if (std::fabs(e[m]) <= eps * tst1) break;
            ++m;
        }

        if (m > l) {
            int iter = 0;
            do {
                ++iter;
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = hypot2(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot2(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for (int k = 0; k < n; ++k) {
                        h = V(k, i + 1);
                        V(k, i + 1) = s * V(k, i) + c * h;
                        V(k, i) = c * V(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1 && iter < 50);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace

SymEigResult sym_eig(const DenseMatrix& A, EigMethod method) {
    require_symmetric(A, "sym_eig");
    const std::size_t n = A.rows();

    std::vector<double> vals;
    DenseMatrix V;
    const bool use_jacobi =
        method == EigMethod::Jacobi || (method == EigMethod::Auto && n <= 64);
    if (use_jacobi) {
        jacobi_eig(A, vals, V);
    } else {
        V = A;
        vals.assign(n, 0.0);
        std::vector<double> e(n, 0.0);
        tred2(V, vals, e);
        tql2(V, vals, e);
    }

    // Descending order; stable so repeated eigenvalues keep the solver's
    // column order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

    SymEigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.eigenvalues[j] = vals[src];
        std::size_t imax = 0;
        double vmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double av = std::fabs(V(i, src));
            if (av > vmax) {
                vmax = av;
                imax = i;
            }
        }
        const double sign = V(imax, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = sign * V(i, src);
    }
    return out;
}

std::vector<double> singular_values(const DenseMatrix& X) {
    const std::size_t n = X.rows(), d = X.cols();
    const std::size_t m = std::min(n, d);
    if (m == 0) return {};
    // Eigenvalues of the smaller Gram matrix; the nonzero spectrum is shared.
    const DenseMatrix G = (n >= d) ? gram(X) : gram(transpose(X));
    SymEigResult eig = sym_eig(G);
    std::vector<double> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = std::sqrt(std::max(0.0, eig.eigenvalues[i]));
    return s;
}

} // namespace iwpca
