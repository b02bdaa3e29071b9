#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "emx/errors.hpp"

namespace emx {

// Dense complex matrices just big enough for the 11x11 per-mode linear
// operator: multiply, LU solve, scaling-and-squaring exponential, and a
// Hessenberg-QR eigenvalue sweep. No attempt at large-scale performance.
struct CMat {
    int n = 0;
    std::vector<std::complex<double>> a;

    CMat() = default;
    explicit CMat(int dim) : n(dim), a(std::size_t(dim) * dim, {0.0, 0.0}) {}

    std::complex<double>& operator()(int i, int j) { return a[std::size_t(i) * n + j]; }
    std::complex<double> operator()(int i, int j) const { return a[std::size_t(i) * n + j]; }

    static CMat identity(int dim) {
        CMat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    CMat operator*(const CMat& o) const {
        CMat r(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const std::complex<double> aik = (*this)(i, k);
                if (aik == std::complex<double>(0.0, 0.0)) continue;
                for (int j = 0; j < n; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    CMat& operator+=(const CMat& o) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }
    CMat operator+(const CMat& o) const {
        CMat r = *this;
        r += o;
        return r;
    }
    CMat& operator*=(std::complex<double> s) {
        for (auto& x : a) x *= s;
        return *this;
    }

    double norm1() const {
        double best = 0.0;
        for (int j = 0; j < n; ++j) {
            double col = 0.0;
            for (int i = 0; i < n; ++i) col += std::abs((*this)(i, j));
            best = std::max(best, col);
        }
        return best;
    }

    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& x) const {
        std::vector<std::complex<double>> y(n, {0.0, 0.0});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }
};

// Solve A X = B in place (X overwrites B), partial pivoting.
inline void lu_solve(CMat a, CMat& b) {
    const int n = a.n;
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        double bv = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > bv) {
                bv = std::abs(a(r, col));
                best = r;
            }
        if (bv == 0.0) throw parameter_error("lu_solve: singular matrix");
        if (best != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
            for (int j = 0; j < b.n; ++j) std::swap(b(col, j), b(best, j));
        }
        for (int r = col + 1; r < n; ++r) {
            const std::complex<double> f = a(r, col) / a(col, col);
            a(r, col) = f;
            for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
            for (int j = 0; j < b.n; ++j) b(r, j) -= f * b(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        for (int j = 0; j < b.n; ++j) {
            for (int k = col + 1; k < n; ++k) b(col, j) -= a(col, k) * b(k, j);
            b(col, j) /= a(col, col);
        }
    }
}

// exp(A) by Pade-13 with scaling and squaring (Higham 2005). The theta_13
// threshold is the standard double-precision value.
inline CMat expm(CMat A) {
    static constexpr double theta13 = 5.371920351148152;
    static constexpr double b13[] = {64764752532480000.0, 32382376266240000.0,
                                     7771770303897600.0,  1187353796428800.0,
                                     129060195264000.0,   10559470521600.0,
                                     670442572800.0,      33522128640.0,
                                     1323241920.0,        40840800.0,
                                     960960.0,            16380.0,
                                     182.0,               1.0};
    const int n = A.n;
    int squarings = 0;
    const double nrm = A.norm1();
    if (nrm > theta13) {
        squarings = int(std::ceil(std::log2(nrm / theta13)));
        A *= std::complex<double>(std::ldexp(1.0, -squarings), 0.0);
    }
    const CMat I = CMat::identity(n);
    const CMat A2 = A * A;
    const CMat A4 = A2 * A2;
    const CMat A6 = A2 * A4;

    CMat W1 = A6;
    W1 *= b13[13];
    {
        CMat t = A4;
        t *= b13[11];
        W1 += t;
        t = A2;
        t *= b13[9];
        W1 += t;
    }
    CMat W2 = A6;
    W2 *= b13[7];
    {
        CMat t = A4;
        t *= b13[5];
        W2 += t;
        t = A2;
        t *= b13[3];
        W2 += t;
        t = I;
        t *= b13[1];
        W2 += t;
    }
    CMat U = A * (A6 * W1 + W2);

    CMat Z1 = A6;
    Z1 *= b13[12];
    {
        CMat t = A4;
        t *= b13[10];
        Z1 += t;
        t = A2;
        t *= b13[8];
        Z1 += t;
    }
    CMat V = A6 * Z1;
    {
        CMat t = A6;
        t *= b13[6];
        V += t;
        t = A4;
        t *= b13[4];
        V += t;
        t = A2;
        t *= b13[2];
        V += t;
        t = I;
        t *= b13[0];
        V += t;
    }

    // (V - U) R = (V + U)
    CMat num = V, den = V;
    num += U;
    CMat negU = U;
    negU *= -1.0;
    den += negU;
    lu_solve(den, num);
    for (int i = 0; i < squarings; ++i) num = num * num;
    return num;
}

// Eigenvalues via Hessenberg reduction and shifted complex QR iteration.
inline std::vector<std::complex<double>> eigenvalues(CMat A, int max_iter = 3000) {
    using C = std::complex<double>;
    const int n = A.n;

    // Householder reduction to upper Hessenberg form.
    for (int col = 0; col < n - 2; ++col) {
        double scale = 0.0;
        for (int i = col + 1; i < n; ++i) scale += std::abs(A(i, col));
        if (scale == 0.0) continue;
        std::vector<C> v(n, C(0.0, 0.0));
        double norm2 = 0.0;
        for (int i = col + 1; i < n; ++i) {
            v[i] = A(i, col) / scale;
            norm2 += std::norm(v[i]);
        }
        const double alpha = std::sqrt(norm2);
        if (alpha == 0.0) continue;
        const C pivot = v[col + 1];
        const C phase = std::abs(pivot) > 0.0 ? pivot / std::abs(pivot) : C(1.0, 0.0);
        v[col + 1] += phase * alpha;
        double vnorm2 = 0.0;
        for (int i = col + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        // A := (I - 2 v v*/|v|^2) A (I - 2 v v*/|v|^2)
        for (int j = 0; j < n; ++j) {
            C dot(0.0, 0.0);
            for (int i = col + 1; i < n; ++i) dot += std::conj(v[i]) * A(i, j);
            dot *= 2.0 / vnorm2;
            for (int i = col + 1; i < n; ++i) A(i, j) -= v[i] * dot;
        }
        for (int i = 0; i < n; ++i) {
            C dot(0.0, 0.0);
            for (int j = col + 1; j < n; ++j) dot += A(i, j) * v[j];
            dot *= 2.0 / vnorm2;
            for (int j = col + 1; j < n; ++j) A(i, j) -= dot * std::conj(v[j]);
        }
    }

    std::vector<C> eig(n);
    int hi = n - 1;
    int iter = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = A(0, 0);
            break;
        }
        // deflate when a subdiagonal entry is negligible
        int lo = hi;
        while (lo > 0) {
            const double sub = std::abs(A(lo, lo - 1));
            const double diag = std::abs(A(lo, lo)) + std::abs(A(lo - 1, lo - 1));
            if (sub <= 1e-15 * std::max(diag, 1e-300)) {
                A(lo, lo - 1) = C(0.0, 0.0);
                break;
            }
            --lo;
        }
        if (std::abs(A(hi, hi - 1)) <= 1e-15 * (std::abs(A(hi, hi)) +
                                                std::abs(A(hi - 1, hi - 1)) + 1e-300)) {
            eig[hi] = A(hi, hi);
            --hi;
            continue;
        }
        if (++iter > max_iter)
            throw std::runtime_error("eigenvalues: QR iteration did not converge");

        // Wilkinson shift from the trailing 2x2 block.
        const C a = A(hi - 1, hi - 1), b = A(hi - 1, hi), c = A(hi, hi - 1), d = A(hi, hi);
        const C tr = a + d;
        const C det = a * d - b * c;
        const C disc = std::sqrt(tr * tr - 4.0 * det);
        const C l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
        const C shift = std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;

        // implicit single-shift QR sweep on the active block via Givens
        for (int i = 0; i <= hi; ++i) A(i, i) -= shift;
        std::vector<std::pair<C, C>> rot(hi); // (c, s) per column
        for (int i = 0; i < hi; ++i) {
            const C x = A(i, i), y = A(i + 1, i);
            const double r = std::sqrt(std::norm(x) + std::norm(y));
            C cs, sn;
            if (r == 0.0) {
                cs = C(1.0, 0.0);
                sn = C(0.0, 0.0);
            } else {
                cs = x / r;
                sn = y / r;
            }
            rot[i] = {cs, sn};
            for (int j = i; j <= hi; ++j) {
                const C t1 = A(i, j), t2 = A(i + 1, j);
                A(i, j) = std::conj(cs) * t1 + std::conj(sn) * t2;
                A(i + 1, j) = -sn * t1 + cs * t2;
            }
        }
        for (int i = 0; i < hi; ++i) {
            const C cs = rot[i].first, sn = rot[i].second;
            for (int j = 0; j <= std::min(i + 2, hi); ++j) {
                const C t1 = A(j, i), t2 = A(j, i + 1);
                A(j, i) = t1 * cs + t2 * sn;
                A(j, i + 1) = -t1 * std::conj(sn) + t2 * std::conj(cs);
            }
        }
        for (int i = 0; i <= hi; ++i) A(i, i) += shift;
    }
    return eig;
}

} // namespace emx
