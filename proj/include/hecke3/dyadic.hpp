#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "hecke3/mat.hpp"
#include "hecke3/rational.hpp"

namespace hecke3 {

struct InsufficientPrecision : std::runtime_error {
    explicit InsufficientPrecision(const std::string& what) : std::runtime_error(what) {}
};

struct NilpotentRisk : std::domain_error {
    explicit NilpotentRisk(const std::string& what) : std::domain_error(what) {}
};

constexpr long kDyadicDefaultPrecision = 32;

// Bounded-precision element of Q_2: value = 2^val * unit with unit odd, the
// unit known modulo 2^prec.  Exact zeros carry val = +infinity (is_zero).
class Dyadic {
   public:
    Dyadic() : zero_(true), prec_(kDyadicDefaultPrecision) {}
    Dyadic(long val, Int unit, long prec);

    static Dyadic from_rational(const Rat& q, long prec = kDyadicDefaultPrecision);
    static Dyadic zero(long prec = kDyadicDefaultPrecision) {
        Dyadic d;
        d.prec_ = prec;
        return d;
    }

    bool is_zero() const { return zero_; }
    long valuation() const;
    long prec() const { return prec_; }
    const Int& unit() const { return unit_; }

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator*(const Dyadic& o) const;
    Dyadic operator/(const Dyadic& o) const;
    Dyadic operator-() const;

    // true if valuation >= n can be certified at the current precision
    bool valuation_at_least(long n) const;

    std::string str() const;

   private:
    bool zero_ = false;
    long val_ = 0;
    Int unit_ = 1;  // odd, known mod 2^prec_
    long prec_ = kDyadicDefaultPrecision;
};

// Exact 2-power-order root of unity e^{2 pi i q}, q with 2-power denominator.
struct RootOfUnity {
    // exponent = num / 2^log2den mod 1, reduced
    Int num = 0;
    long log2den = 0;

    static RootOfUnity one() { return RootOfUnity{}; }
    static RootOfUnity from_exponent(const Rat& q);

    Rat exponent() const;
    RootOfUnity operator*(const RootOfUnity& o) const;
    RootOfUnity inverse() const;
    bool operator==(const RootOfUnity& o) const { return num == o.num && log2den == o.log2den; }

    // exact value in Q(i) when the exponent has denominator <= 4
    std::optional<GaussRat> to_gauss() const;
    std::string str() const;
};

// psi: additive character of Q_2, trivial on 2 Z_2, nontrivial on Z_2;
// psi(x) = e^{pi i r(x)} with r(x) the canonical digit expansion of x through
// position 2^0.  psi(1) = -1, psi(1/2) = sqrt(-1).
RootOfUnity psi(const Dyadic& x);
RootOfUnity psi(const Rat& x);

struct FiltrationLevel {
    long n;
};

using Mat2d = SqMat<Dyadic, 2>;

Mat2d to_dyadic(const Mat2q& m, long prec = kDyadicDefaultPrecision);

// Membership of m in P^n (the n-th power of the principal ideal of the
// standard order U), decided by the closed-form valuation pattern.
bool in_ideal_power(const Mat2d& m, FiltrationLevel n);
bool in_ideal_power(const Mat2q& m, FiltrationLevel n);

// Membership in U_U^n = 1 + P^n (n >= 1).
bool in_unit_filtration(const Mat2d& m, FiltrationLevel n);
bool in_unit_filtration(const Mat2q& m, FiltrationLevel n);

// alpha(D, t) = (1/8) [[0, 1], [2D, 2t]]; D mod 4 in {1,-1}, t mod 2 in {0,1}
struct AlphaDatum {
    int D;  // 1 or -1
    int t;  // 0 or 1
};

Mat2q alpha_matrix(const AlphaDatum& a);

// psi_alpha(x) = psi(tr(alpha (x - 1))) for x in U_U^3
RootOfUnity psi_alpha(const AlphaDatum& a, const Mat2q& x);

struct EUnitsDecomposition {
    long n;  // power of Pi_D = [[0,1],[2D,0]]
    Rat x, y;
};

// E^x = <Pi_D> x {[[x,y],[2Dy,x]] : x unit}; returns the decomposition of g
// or nullopt.
std::optional<EUnitsDecomposition> in_E_units(const Mat2q& g, int D);

// J_alpha = E^x U_U^3 membership by finite search over E^x classes.
bool in_J_alpha(const Mat2q& g, const AlphaDatum& a);

// Normal form of alpha = (1/8) [[2a, b],[2c, 2d]]: D = bc - 2ad mod 4,
// t = a + d mod 2.  Throws NilpotentRisk unless b and c are 2-adic units.
AlphaDatum alpha_normal_form(const Rat& a, const Rat& b, const Rat& c, const Rat& d);

// Retry helper for the documented precision-doubling policy.
template <class F>
auto with_precision_retry(F&& f, long start = kDyadicDefaultPrecision, long cap = 1024) {
    long prec = start;
    while (true) {
        try {
            return f(prec);
        } catch (const InsufficientPrecision&) {
            prec *= 2;
            if (prec > cap) throw;
        }
    }
}

}  // namespace hecke3
