#include "liespec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace liespec {

namespace {

template <typename T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.cols() != b.rows()) throw ValidationError("matrix shape mismatch in *");
    DenseMatrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

} // namespace

Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return multiply(a, b); }

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw ValidationError("matrix-vector shape mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

CMatrix to_complex(const Matrix& a) {
    CMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    return c;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return k;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

double frobenius_norm(const CMatrix& a) {
    double s = 0.0;
    for (const auto& x : a.data()) s += std::norm(x);
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const CMatrix& a) {
    double m = 0.0;
    for (const auto& x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double trace(const Matrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

Complex trace(const CMatrix& a) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ValidationError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double quadratic_form(const Matrix& m, std::span<const double> x, std::span<const double> y) {
    if (m.rows() != x.size() || m.cols() != y.size())
        throw ValidationError("quadratic_form: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (x[i] == 0.0) continue;
        double r = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) r += m(i, j) * y[j];
        s += x[i] * r;
    }
    return s;
}

double quadratic_form(const Matrix& m, std::span<const double> x) { return quadratic_form(m, x, x); }

bool is_symmetric(const Matrix& a, double tol) {
    if (!a.square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

bool is_hermitian(const CMatrix& a, double tol) {
    if (!a.square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
    return true;
}

bool is_orthogonal(const Matrix& q, double tol) {
    if (!q.square()) return false;
    const Matrix g = q.transpose() * q;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (std::abs(g(i, j) - (i == j ? 1.0 : 0.0)) > tol) return false;
    return true;
}

double determinant(const Matrix& a) {
    if (!a.square()) throw ValidationError("determinant of non-square matrix");
    Matrix lu = a;
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (lu(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            det = -det;
        }
        det *= lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return det;
}

Matrix inverse(const Matrix& a) {
    if (!a.square()) throw ValidationError("inverse of non-square matrix");
    const std::size_t n = a.rows();
    Matrix w = a;
    Matrix inv = Matrix::identity(n);
    const double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(w(i, k)) > std::abs(w(piv, k))) piv = i;
        if (std::abs(w(piv, k)) <= 1e-15 * scale) throw SingularMatrixError("matrix is singular");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(k, j), w(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        const double d = w(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            w(k, j) /= d;
            inv(k, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = w(i, k);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w(i, j) -= f * w(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

Matrix cholesky(const Matrix& a) {
    if (!a.square()) throw ValidationError("cholesky of non-square matrix");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw ComputationError("cholesky: matrix not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

SymmetricEigen jacobi_eigen(const Matrix& input, double rel_tol, int max_sweeps) {
    if (!input.square()) throw ValidationError("jacobi_eigen: non-square matrix");
    const std::size_t n = input.rows();
    Matrix a = input;
    // symmetrize to remove representation noise
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
    Matrix v = Matrix::identity(n);
    const double target = rel_tol * frobenius_norm(a);

    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < max_sweeps && off_mass() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    if (off_mass() > target) throw ComputationError("jacobi_eigen: no convergence");

    SymmetricEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    out.vectors = std::move(v);
    out.sweeps = sweep;
    return out;
}

SymmetricEigen jacobi_eigen_descending(const Matrix& a, double rel_tol) {
    SymmetricEigen e = jacobi_eigen(a, rel_tol);
    const std::size_t n = e.values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return e.values[i] > e.values[j]; });
    SymmetricEigen sorted;
    sorted.values.resize(n);
    sorted.vectors = Matrix(n, n);
    sorted.sweeps = e.sweeps;
    for (std::size_t k = 0; k < n; ++k) {
        sorted.values[k] = e.values[order[k]];
        for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, k) = e.vectors(i, order[k]);
    }
    return sorted;
}

Vector hermitian_eigenvalues(const CMatrix& input, double rel_tol, int max_sweeps) {
    if (!input.square()) throw ValidationError("hermitian_eigenvalues: non-square matrix");
    const std::size_t n = input.rows();
    CMatrix a = input;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    const double target = rel_tol * frobenius_norm(a);
    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps && off_mass() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double g = std::abs(a(p, q));
                if (g == 0.0) continue;
                const Complex e = a(p, q) / g;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * g);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex se = s * e, sec = s * std::conj(e);
                // A <- A U, U = [[c, s e], [-s conj(e), c]] on (p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sec * akq;
                    a(k, q) = se * akp + c * akq;
                }
                // A <- U* A
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - se * aqk;
                    a(q, k) = sec * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = app - t * g;
                a(q, q) = aqq + t * g;
            }
    }
    if (off_mass() > target) throw ComputationError("hermitian_eigenvalues: no convergence");
    Vector values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
    return values;
}

double lambda_min_hermitian(const CMatrix& a) {
    if (!a.square()) throw ValidationError("lambda_min_hermitian: non-square matrix");
    if (!is_hermitian(a, 1e-10 * std::max(1.0, max_abs(a))))
        throw ValidationError("lambda_min_hermitian: matrix is not hermitian");
    if (a.rows() == 0) throw ValidationError("lambda_min_hermitian: empty matrix");
    const Vector ev = hermitian_eigenvalues(a);
    return *std::min_element(ev.begin(), ev.end());
}

bool is_positive_definite_shifted(const CMatrix& a, double shift) {
    const std::size_t n = a.rows();
    CMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real() - shift;
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return true;
}

SingularValues singular_values(const Matrix& a) {
    const std::size_t r = a.rows(), c = a.cols();
    // work on columns of W = A; W V = U Σ
    std::vector<Vector> w(c, Vector(r));
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t i = 0; i < r; ++i) w[j][i] = a(i, j);
    Matrix v = Matrix::identity(c);
    constexpr double eps = 1e-15;
    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < c; ++i)
            for (std::size_t j = i + 1; j < c; ++j) {
                double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t k = 0; k < r; ++k) {
                    alpha += w[i][k] * w[i][k];
                    beta += w[j][k] * w[j][k];
                    gamma += w[i][k] * w[j][k];
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t k = 0; k < r; ++k) {
                    const double wi = w[i][k], wj = w[j][k];
                    w[i][k] = cs * wi - sn * wj;
                    w[j][k] = sn * wi + cs * wj;
                }
                for (std::size_t k = 0; k < c; ++k) {
                    const double vi = v(k, i), vj = v(k, j);
                    v(k, i) = cs * vi - sn * vj;
                    v(k, j) = sn * vi + cs * vj;
                }
            }
        if (!rotated) break;
    }
    std::vector<double> sv(c);
    for (std::size_t j = 0; j < c; ++j) sv[j] = norm(w[j]);
    std::vector<std::size_t> order(c);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });
    SingularValues out;
    out.values.resize(c);
    out.right = Matrix(c, c);
    for (std::size_t k = 0; k < c; ++k) {
        out.values[k] = sv[order[k]];
        for (std::size_t i = 0; i < c; ++i) out.right(i, k) = v(i, order[k]);
    }
    return out;
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    const Vector sv = singular_values(a).values;
    if (sv.empty() || sv.front() == 0.0) return 0;
    const double cut = rel_tol * sv.front();
    return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cut; }));
}

std::size_t numerical_rank(const CMatrix& a, double rel_tol) {
    const std::size_t r = a.rows(), c = a.cols();
    Matrix re(2 * r, 2 * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            re(i, j) = a(i, j).real();
            re(i, j + c) = -a(i, j).imag();
            re(i + r, j) = a(i, j).imag();
            re(i + r, j + c) = a(i, j).real();
        }
    return numerical_rank(re, rel_tol) / 2;
}

std::vector<Vector> orthonormal_span(std::span<const Vector> vectors, double rel_tol) {
    if (vectors.empty()) return {};
    const std::size_t m = vectors.front().size();
    Matrix rows(vectors.size(), m);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != m) throw ValidationError("orthonormal_span: length mismatch");
        for (std::size_t j = 0; j < m; ++j) rows(i, j) = vectors[i][j];
    }
    const SingularValues svd = singular_values(rows);
    std::vector<Vector> basis;
    if (svd.values.empty() || svd.values.front() == 0.0) return basis;
    const double cut = rel_tol * svd.values.front();
    for (std::size_t k = 0; k < svd.values.size(); ++k)
        if (svd.values[k] > cut) basis.push_back(svd.right.column(k));
    return basis;
}

Matrix qr_orthogonal_factor(const Matrix& input) {
    if (!input.square()) throw ValidationError("qr: non-square matrix");
    const std::size_t n = input.rows();
    Matrix r = input;
    Matrix q = Matrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k; i < n; ++i) nrm += r(i, k) * r(i, k);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) continue;
        Vector u(n, 0.0);
        const double alpha = r(k, k) > 0 ? -nrm : nrm;
        u[k] = r(k, k) - alpha;
        for (std::size_t i = k + 1; i < n; ++i) u[i] = r(i, k);
        const double unorm2 = dot(u, u);
        if (unorm2 == 0.0) continue;
        // R <- H R, Q <- Q H with H = I - 2 u uᵀ / uᵀu
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += u[i] * r(i, j);
            s *= 2.0 / unorm2;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= s * u[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k; j < n; ++j) s += q(i, j) * u[j];
            s *= 2.0 / unorm2;
            for (std::size_t j = k; j < n; ++j) q(i, j) -= s * u[j];
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        if (r(k, k) < 0)
            for (std::size_t i = 0; i < n; ++i) q(i, k) = -q(i, k);
    return q;
}

} // namespace liespec
