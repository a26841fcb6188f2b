#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hecke3 {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_from_string(const std::string& s) { return Int(s); }

inline Rat rat_of(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& q);

// 2-adic valuation; throws on zero input.
long val2(const Int& n);
long val2(const Rat& q);
long valp(const Int& n, const Int& p);
long valp(const Rat& q, const Int& p);

// Exact element of Q(i).  All arithmetic is exact; conjugation is the
// nontrivial field automorphism.
struct GaussRat {
    Rat re, im;

    GaussRat() = default;
    GaussRat(Rat r) : re(std::move(r)) {}
    GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(long r) : re(rat_of(r)) {}
    GaussRat(long r, long i) : re(rat_of(r)), im(rat_of(i)) {}

    static GaussRat sqrt_minus_one() { return GaussRat(rat_of(0), rat_of(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussRat conj() const { return GaussRat(re, Rat(-im)); }
    Rat norm() const { return re * re + im * im; }

    GaussRat operator-() const { return GaussRat(Rat(-re), Rat(-im)); }
    GaussRat operator+(const GaussRat& o) const { return GaussRat(re + o.re, im + o.im); }
    GaussRat operator-(const GaussRat& o) const { return GaussRat(re - o.re, im - o.im); }
    GaussRat operator*(const GaussRat& o) const {
        return GaussRat(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    GaussRat operator/(const GaussRat& o) const {
        Rat n = o.norm();
        if (n == 0) throw std::domain_error("GaussRat: division by zero");
        return GaussRat((re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n);
    }
    GaussRat& operator+=(const GaussRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRat& operator-=(const GaussRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }
    bool operator==(const GaussRat& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussRat& o) const { return !(*this == o); }
};

// Canonical form "a/b" for real values, "a/b+c/d*i" otherwise; no decimals.
std::string gauss_to_string(const GaussRat& z);
GaussRat gauss_from_string(const std::string& s);

}  // namespace hecke3
