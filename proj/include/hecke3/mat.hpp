#pragma once

#include <array>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "hecke3/rational.hpp"

namespace hecke3 {

// Small fixed-size square matrix, row-major.
template <class T, std::size_t N>
struct SqMat {
    std::array<T, N * N> a{};

    T& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static SqMat identity() {
        SqMat m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = T(i == j ? 1 : 0);
        return m;
    }

    static SqMat zero() {
        SqMat m;
        for (auto& x : m.a) x = T(0);
        return m;
    }

    SqMat operator*(const SqMat& o) const {
        SqMat r = zero();
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const T& x = (*this)(i, k);
                if (x == T(0)) continue;
                for (std::size_t j = 0; j < N; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }

    SqMat operator+(const SqMat& o) const {
        SqMat r;
        for (std::size_t i = 0; i < N * N; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }

    SqMat operator-(const SqMat& o) const {
        SqMat r;
        for (std::size_t i = 0; i < N * N; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }

    SqMat transpose() const {
        SqMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool operator==(const SqMat& o) const { return a == o.a; }
    bool operator!=(const SqMat& o) const { return !(*this == o); }

    std::array<T, N> col(std::size_t j) const {
        std::array<T, N> c;
        for (std::size_t i = 0; i < N; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_col(std::size_t j, const std::array<T, N>& c) {
        for (std::size_t i = 0; i < N; ++i) (*this)(i, j) = c[i];
    }
};

using Mat2q = SqMat<Rat, 2>;
using Mat3q = SqMat<Rat, 3>;
using Mat3z = SqMat<Int, 3>;

template <class T>
T det2(const SqMat<T, 2>& m) {
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <class T>
T det3(const SqMat<T, 3>& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

template <class T>
SqMat<T, 3> adjugate3(const SqMat<T, 3>& m) {
    SqMat<T, 3> r;
    r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return r;
}

inline Mat3q inverse3(const Mat3q& m) {
    Rat d = det3(m);
    if (d == 0) throw std::domain_error("inverse3: singular matrix");
    Mat3q adj = adjugate3(m);
    Mat3q r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = adj.a[i] / d;
    return r;
}

inline Mat2q inverse2(const Mat2q& m) {
    Rat d = det2(m);
    if (d == 0) throw std::domain_error("inverse2: singular matrix");
    Mat2q r;
    r(0, 0) = m(1, 1) / d;
    r(0, 1) = -m(0, 1) / d;
    r(1, 0) = -m(1, 0) / d;
    r(1, 1) = m(0, 0) / d;
    return r;
}

inline Mat3q to_rat(const Mat3z& m) {
    Mat3q r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = Rat(m.a[i]);
    return r;
}

// Parses "r11,r12,r13;r21,r22,r23;r31,r32,r33" with rational entries.
Mat3q mat3_from_string(const std::string& s);
std::string mat3_to_string(const Mat3q& m);
Mat2q mat2_from_string(const std::string& s);

}  // namespace hecke3
