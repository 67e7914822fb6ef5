#ifndef BCLAB_MATRIX_HPP
#define BCLAB_MATRIX_HPP

#include <array>

#include "core.hpp"

namespace bclab {

struct Matrix2 {
    cplx a11{}, a12{}, a21{}, a22{};

    static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Matrix2 diag(cplx x, cplx y) { return {x, 0.0, 0.0, y}; }

    cplx& at(int i, int j) { return i == 0 ? (j == 0 ? a11 : a12) : (j == 0 ? a21 : a22); }
    cplx at(int i, int j) const { return i == 0 ? (j == 0 ? a11 : a12) : (j == 0 ? a21 : a22); }

    cplx trace() const { return a11 + a22; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    double norm() const { return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)}); }

    Matrix2 inverse() const
    {
        const cplx d = det();
        if (std::abs(d) <= pole_tolerance * std::max(1.0, norm() * norm()))
            throw Singular("2x2 matrix is singular");
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Matrix2& operator+=(const Matrix2& o)
    {
        a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
        return *this;
    }
    Matrix2& operator-=(const Matrix2& o)
    {
        a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
        return *this;
    }
};

inline Matrix2 operator+(Matrix2 a, const Matrix2& b) { return a += b; }
inline Matrix2 operator-(Matrix2 a, const Matrix2& b) { return a -= b; }
inline Matrix2 operator*(cplx s, const Matrix2& m) { return {s * m.a11, s * m.a12, s * m.a21, s * m.a22}; }
inline Matrix2 operator*(const Matrix2& m, cplx s) { return s * m; }
inline Matrix2 operator/(const Matrix2& m, cplx s) { return {m.a11 / s, m.a12 / s, m.a21 / s, m.a22 / s}; }
inline Matrix2 operator*(const Matrix2& x, const Matrix2& y)
{
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
        x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}
inline Matrix2 commutator(const Matrix2& x, const Matrix2& y) { return x * y - y * x; }

// |a - b| / max(1, |a|, |b|) in the max-entry norm
inline double matrix_residual(const Matrix2& a, const Matrix2& b)
{
    return (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
}

// |det a - det b| on the scale of the entries: a determinant of entries of size n
// carries rounding of order eps n^2, however small the determinant itself is
inline double det_residual(const Matrix2& a, const Matrix2& b)
{
    const double n = std::max(a.norm(), b.norm());
    return std::abs(a.det() - b.det()) / std::max({1.0, std::abs(a.det()), std::abs(b.det()), n * n});
}

// Pauli matrices sigma_0..sigma_3
inline Matrix2 pauli(int k)
{
    switch (k) {
    case 0: return Matrix2::identity();
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -I, I, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default: throw std::invalid_argument("pauli index must be 0..3");
    }
}

// Generator index alpha multiplies sigma_{4-alpha} (alpha = 1..3); index 0 stays sigma_0.
inline Matrix2 pauli_flip(int alpha) { return alpha == 0 ? pauli(0) : pauli(4 - alpha); }

// Coefficient of pauli_flip(alpha) in m (m = sum_a x_a pauli_flip(a)).
inline cplx flip_component(const Matrix2& m, int alpha) { return (m * pauli_flip(alpha)).trace() / 2.0; }

struct Matrix4 {
    std::array<cplx, 16> e{};

    static Matrix4 identity()
    {
        Matrix4 r;
        for (int i = 0; i < 4; ++i)
            r(i, i) = 1.0;
        return r;
    }
    cplx& operator()(int i, int j) { return e[4 * i + j]; }
    cplx operator()(int i, int j) const { return e[4 * i + j]; }
    double norm() const
    {
        double m = 0.0;
        for (auto x : e)
            m = std::max(m, std::abs(x));
        return m;
    }
    Matrix4& operator+=(const Matrix4& o)
    {
        for (int i = 0; i < 16; ++i)
            e[i] += o.e[i];
        return *this;
    }
    Matrix4& operator-=(const Matrix4& o)
    {
        for (int i = 0; i < 16; ++i)
            e[i] -= o.e[i];
        return *this;
    }
};

inline Matrix4 operator+(Matrix4 a, const Matrix4& b) { return a += b; }
inline Matrix4 operator-(Matrix4 a, const Matrix4& b) { return a -= b; }
inline Matrix4 operator*(cplx s, Matrix4 m)
{
    for (auto& x : m.e)
        x *= s;
    return m;
}
inline Matrix4 operator*(const Matrix4& x, const Matrix4& y)
{
    Matrix4 r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{})
                continue;
            for (int j = 0; j < 4; ++j)
                r(i, j) += xik * y(k, j);
        }
    return r;
}
inline Matrix4 commutator(const Matrix4& x, const Matrix4& y) { return x * y - y * x; }

// (A (x) B)_{2i+k, 2j+l} = A_ij B_kl
inline Matrix4 kron(const Matrix2& a, const Matrix2& b)
{
    Matrix4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    r(2 * i + k, 2 * j + l) = a.at(i, j) * b.at(k, l);
    return r;
}

inline Matrix4 leg1(const Matrix2& a) { return kron(a, Matrix2::identity()); }
inline Matrix4 leg2(const Matrix2& a) { return kron(Matrix2::identity(), a); }

} // namespace bclab

#endif
