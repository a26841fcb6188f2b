#include "hecke3/dyadic.hpp"

#include <algorithm>
#include <sstream>

namespace hecke3 {

namespace {

Int pow2(long k) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(k));
    return r;
}

Int mod_pow2(const Int& x, long k) {
    Int r;
    Int m = pow2(k);
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int inv_mod_pow2(const Int& x, long k) {
    Int r, m = pow2(k);
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("inverse of even residue");
    return r;
}

// residue of a 2-integral rational modulo 2^k
Int rat_mod_pow2(const Rat& q, long k) {
    Int num = q.get_num(), den = q.get_den();
    if (val2(den) != 0) throw std::domain_error("rational is not 2-integral");
    return mod_pow2(num * inv_mod_pow2(mod_pow2(den, k + 1), k), k);
}

}  // namespace

Dyadic::Dyadic(long val, Int unit, long prec) : zero_(false), val_(val), prec_(prec) {
    if (prec < 1) throw std::invalid_argument("Dyadic precision must be >= 1");
    unit_ = mod_pow2(unit, prec);
    if (mpz_even_p(unit_.get_mpz_t())) throw std::invalid_argument("Dyadic unit must be odd");
}

Dyadic Dyadic::from_rational(const Rat& q, long prec) {
    if (q == 0) return Dyadic::zero(prec);
    long vn = val2(Int(q.get_num()));
    long vd = val2(Int(q.get_den()));
    Int num_odd = q.get_num() / pow2(vn);
    Int den_odd = q.get_den() / pow2(vd);
    Int unit = mod_pow2(num_odd * inv_mod_pow2(mod_pow2(den_odd, prec), prec), prec);
    return Dyadic(vn - vd, unit, prec);
}

long Dyadic::valuation() const {
    if (zero_) throw std::domain_error("valuation of exact zero");
    return val_;
}

bool Dyadic::valuation_at_least(long n) const {
    if (zero_) return true;
    return val_ >= n;
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    if (zero_) return o;
    if (o.zero_) return *this;
    long vmin = std::min(val_, o.val_);
    long abs1 = val_ + prec_, abs2 = o.val_ + o.prec_;
    long m = std::min(abs1, abs2) - vmin;  // digits of the shifted sum we know
    if (m < 1) throw InsufficientPrecision("sum has no known digits");
    Int inner = mod_pow2(unit_ * pow2(val_ - vmin) + o.unit_ * pow2(o.val_ - vmin), m);
    if (inner == 0)
        throw InsufficientPrecision("cancellation exceeds precision in dyadic sum");
    long shift = val2(inner);
    if (m - shift < 1)
        throw InsufficientPrecision("cancellation exceeds precision in dyadic sum");
    return Dyadic(vmin + shift, inner / pow2(shift), m - shift);
}

Dyadic Dyadic::operator-() const {
    if (zero_) return *this;
    return Dyadic(val_, pow2(prec_) - unit_, prec_);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
    if (zero_ || o.zero_) return Dyadic::zero(std::min(prec_, o.prec_));
    long p = std::min(prec_, o.prec_);
    return Dyadic(val_ + o.val_, mod_pow2(unit_ * o.unit_, p), p);
}

Dyadic Dyadic::operator/(const Dyadic& o) const {
    if (o.zero_) throw std::domain_error("dyadic division by zero");
    if (zero_) return *this;
    long p = std::min(prec_, o.prec_);
    return Dyadic(val_ - o.val_, mod_pow2(unit_ * inv_mod_pow2(o.unit_, p), p), p);
}

std::string Dyadic::str() const {
    if (zero_) return "0";
    std::ostringstream os;
    os << "2^" << val_ << " * (" << unit_.get_str() << " mod 2^" << prec_ << ")";
    return os.str();
}

RootOfUnity RootOfUnity::from_exponent(const Rat& q) {
    Int den = q.get_den();
    long k = val2(den);
    if (pow2(k) != den) throw std::invalid_argument("exponent denominator must be a 2-power");
    Int num;
    mpz_fdiv_r(num.get_mpz_t(), Int(q.get_num()).get_mpz_t(), Int(den).get_mpz_t());
    RootOfUnity r{num, k};
    while (r.log2den > 0 && mpz_even_p(r.num.get_mpz_t())) {
        r.num /= 2;
        --r.log2den;
    }
    if (r.num == 0) r.log2den = 0;
    return r;
}

Rat RootOfUnity::exponent() const {
    Rat q(num, pow2(log2den));
    q.canonicalize();
    return q;
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    return from_exponent(exponent() + o.exponent());
}

RootOfUnity RootOfUnity::inverse() const { return from_exponent(-exponent()); }

std::optional<GaussRat> RootOfUnity::to_gauss() const {
    if (log2den > 2) return std::nullopt;
    long scaled = static_cast<long>(Int(num * pow2(2 - log2den)).get_si());  // quarter turns
    switch (scaled & 3) {
        case 0: return GaussRat(1);
        case 1: return GaussRat(0, 1);
        case 2: return GaussRat(-1);
        default: return GaussRat(0, -1);
    }
}

std::string RootOfUnity::str() const {
    if (auto g = to_gauss()) return gauss_to_string(*g);
    return "e(" + num.get_str() + "/" + pow2(log2den).get_str() + ")";
}

RootOfUnity psi(const Dyadic& x) {
    if (x.is_zero()) return RootOfUnity::one();
    long v = x.valuation();
    if (v >= 1) return RootOfUnity::one();
    if (x.prec() < 1 - v)
        throw InsufficientPrecision("psi needs the digits through position 2^0");
    Int digits = mod_pow2(x.unit(), 1 - v);
    // psi(x) = e^{pi i r(x)}, r(x) = 2^v * digits; exponent r/2 mod 1
    Rat q(digits, pow2(1 - v));
    q.canonicalize();
    return RootOfUnity::from_exponent(q);
}

RootOfUnity psi(const Rat& x) {
    if (x == 0) return RootOfUnity::one();
    long needed = std::max<long>(2, 2 - val2(x));
    return psi(Dyadic::from_rational(x, needed));
}

Mat2d to_dyadic(const Mat2q& m, long prec) {
    Mat2d out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out(i, j) = Dyadic::from_rational(m(i, j), prec);
    return out;
}

namespace {

// valuation lower bounds for the four entries of P^n
std::array<long, 4> ideal_pattern(long n) {
    long k = (n % 2 == 0) ? n / 2 : (n - 1) / 2;
    if (n == 2 * k) return {k, k, k + 1, k};         // [a b; c d] = 2^k U
    return {k + 1, k, k + 1, k + 1};                 // 2^k Pi U
}

}  // namespace

bool in_ideal_power(const Mat2d& m, FiltrationLevel n) {
    auto pat = ideal_pattern(n.n);
    return m(0, 0).valuation_at_least(pat[0]) && m(0, 1).valuation_at_least(pat[1]) &&
           m(1, 0).valuation_at_least(pat[2]) && m(1, 1).valuation_at_least(pat[3]);
}

bool in_ideal_power(const Mat2q& m, FiltrationLevel n) {
    auto pat = ideal_pattern(n.n);
    auto ok = [](const Rat& x, long bound) { return x == 0 || val2(x) >= bound; };
    return ok(m(0, 0), pat[0]) && ok(m(0, 1), pat[1]) && ok(m(1, 0), pat[2]) &&
           ok(m(1, 1), pat[3]);
}

bool in_unit_filtration(const Mat2d& m, FiltrationLevel n) {
    if (n.n < 1) throw std::invalid_argument("unit filtration needs n >= 1");
    Mat2d shifted = m;
    Dyadic one = Dyadic::from_rational(Rat(1), kDyadicDefaultPrecision);
    shifted(0, 0) = m(0, 0) - one;
    shifted(1, 1) = m(1, 1) - one;
    return in_ideal_power(shifted, n);
}

bool in_unit_filtration(const Mat2q& m, FiltrationLevel n) {
    if (n.n < 1) throw std::invalid_argument("unit filtration needs n >= 1");
    Mat2q shifted = m;
    shifted(0, 0) -= 1;
    shifted(1, 1) -= 1;
    return in_ideal_power(shifted, n);
}

Mat2q alpha_matrix(const AlphaDatum& a) {
    Mat2q m;
    m(0, 0) = 0;
    m(0, 1) = rat_of(1, 8);
    m(1, 0) = rat_of(2 * a.D, 8);
    m(1, 1) = rat_of(2 * a.t, 8);
    return m;
}

RootOfUnity psi_alpha(const AlphaDatum& a, const Mat2q& x) {
    if (!in_unit_filtration(x, FiltrationLevel{3}))
        throw std::invalid_argument("psi_alpha argument must lie in U_U^3");
    // tr(alpha (x-1)) = (y21 + 2D y12 + 2t y22)/8 with y = x - 1
    Rat y12 = x(0, 1), y21 = x(1, 0), y22 = x(1, 1) - 1;
    Rat tr = (y21 + Rat(2 * a.D) * y12 + Rat(2 * a.t) * y22) / 8;
    return psi(tr);
}

std::optional<EUnitsDecomposition> in_E_units(const Mat2q& g, int D) {
    Rat det = det2(g);
    if (det == 0) return std::nullopt;
    long n = val2(det);
    // Pi_D^{-1} = [[0, 1/(2D)], [1, 0]]
    Mat2q pi_inv;
    pi_inv(0, 0) = 0;
    pi_inv(0, 1) = rat_of(1, 2 * D);
    pi_inv(1, 0) = 1;
    pi_inv(1, 1) = 0;
    Mat2q pi;
    pi(0, 0) = 0;
    pi(0, 1) = 1;
    pi(1, 0) = rat_of(2 * D);
    pi(1, 1) = 0;

    Mat2q h = g;
    for (long i = 0; i < n; ++i) h = pi_inv * h;
    for (long i = 0; i < -n; ++i) h = pi * h;

    if (h(0, 0) != h(1, 1)) return std::nullopt;
    if (h(1, 0) != Rat(2 * D) * h(0, 1)) return std::nullopt;
    Rat x = h(0, 0), y = h(0, 1);
    if (x == 0 || val2(x) != 0) return std::nullopt;
    if (y != 0 && val2(y) < 0) return std::nullopt;
    return EUnitsDecomposition{n, x, y};
}

bool in_J_alpha(const Mat2q& g, const AlphaDatum& a) {
    Rat det = det2(g);
    if (det == 0) return false;
    long n = val2(det);
    Mat2q pi;
    pi(0, 0) = 0;
    pi(0, 1) = 1;
    pi(1, 0) = Rat(2 * a.D);
    pi(1, 1) = 0;
    Mat2q pi_inv = inverse2(pi);
    Mat2q h = g;
    for (long i = 0; i < n; ++i) h = pi_inv * h;
    for (long i = 0; i < -n; ++i) h = pi * h;
    // h should be circ(x, y) * u with u in U_U^3; classes of circ(x, y) only
    // matter mod 2^5
    const long M = 32;
    for (long x = 1; x < M; x += 2) {
        for (long y = 0; y < M; ++y) {
            Mat2q circ;
            circ(0, 0) = Rat(x);
            circ(0, 1) = Rat(y);
            circ(1, 0) = Rat(2 * a.D * y);
            circ(1, 1) = Rat(x);
            if (det2(circ) == 0) continue;
            Mat2q cand = inverse2(circ) * h;
            if (in_unit_filtration(cand, FiltrationLevel{3})) return true;
        }
    }
    return false;
}

AlphaDatum alpha_normal_form(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    auto is_unit = [](const Rat& q) { return q != 0 && val2(q) == 0; };
    auto is_integral = [](const Rat& q) { return q == 0 || val2(q) >= 0; };
    if (!is_unit(b) || !is_unit(c))
        throw NilpotentRisk("off-diagonal entries must be 2-adic units");
    if (!is_integral(a) || !is_integral(d))
        throw std::invalid_argument("diagonal parameters must be 2-integral");
    Rat Dval = b * c - 2 * a * d;
    Rat tval = a + d;
    long Dmod = static_cast<long>(rat_mod_pow2(Dval, 2).get_si());
    long tmod = static_cast<long>(rat_mod_pow2(tval, 1).get_si());
    return AlphaDatum{Dmod == 1 ? 1 : -1, tmod == 0 ? 0 : 1};
}

}  // namespace hecke3
