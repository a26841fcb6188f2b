#include "hecke3/repaudit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace hecke3 {

namespace {

std::uint32_t mod_mask(std::uint32_t mod) { return mod - 1; }  // mod is a power of two

std::uint32_t v2_mod(std::uint32_t x, std::uint32_t mod) {
    // valuation of x as an element of Z/mod; mod itself encodes "zero"
    if ((x & mod_mask(mod)) == 0) return 32;
    std::uint32_t v = 0;
    while ((x & 1) == 0) {
        x >>= 1;
        ++v;
    }
    return v;
}

std::uint32_t inv_mod(std::uint32_t u, std::uint32_t mod) {
    // odd u, mod = 2^k: Newton doubling from the mod-8 seed u
    std::uint64_t inv = u;
    for (int it = 0; it < 6; ++it) inv = inv * (2 - u * inv);
    return static_cast<std::uint32_t>(inv & mod_mask(mod));
}

}  // namespace

Mat3Mod Mat3Mod::identity(std::uint32_t mod) {
    Mat3Mod m{mod, {}};
    m(0, 0) = m(1, 1) = m(2, 2) = 1;
    return m;
}

Mat3Mod Mat3Mod::operator*(const Mat3Mod& o) const {
    Mat3Mod r{mod, {}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            std::uint64_t s = 0;
            for (std::size_t k = 0; k < 3; ++k)
                s += (std::uint64_t)(*this)(i, k) * o(k, j);
            r(i, j) = static_cast<std::uint32_t>(s & mod_mask(mod));
        }
    return r;
}

std::uint32_t Mat3Mod::det() const {
    const auto& m = *this;
    std::int64_t d = (std::int64_t)m(0, 0) * m(1, 1) % mod * m(2, 2) % mod;
    d += (std::int64_t)m(0, 1) * m(1, 2) % mod * m(2, 0) % mod;
    d += (std::int64_t)m(0, 2) * m(1, 0) % mod * m(2, 1) % mod;
    d -= (std::int64_t)m(0, 2) * m(1, 1) % mod * m(2, 0) % mod;
    d -= (std::int64_t)m(0, 0) * m(1, 2) % mod * m(2, 1) % mod;
    d -= (std::int64_t)m(0, 1) * m(1, 0) % mod * m(2, 2) % mod;
    d %= (std::int64_t)mod;
    if (d < 0) d += mod;
    return static_cast<std::uint32_t>(d);
}

std::string rep_class_name(RepClass c) {
    switch (c) {
        case RepClass::Identity: return "identity";
        case RepClass::LongWeyl: return "long-weyl";
        default: return "corner-2^" + std::to_string(static_cast<int>(c) - 1);
    }
}

Mat3Mod rep_class_matrix(RepClass c, std::uint32_t mod) {
    Mat3Mod m = Mat3Mod::identity(mod);
    if (c == RepClass::LongWeyl) {
        m = Mat3Mod{mod, {}};
        m(0, 2) = 1;
        m(1, 1) = 1;
        m(2, 0) = 1;
        return m;
    }
    if (c != RepClass::Identity) {
        int i = static_cast<int>(c) - 1;
        m(2, 0) = (1u << i) & mod_mask(mod);
    }
    return m;
}

bool in_P(const Mat3Mod& g) { return g.invertible() && g(2, 0) == 0 && g(2, 1) == 0; }
bool in_Q(const Mat3Mod& g) { return g.invertible() && g(1, 0) == 0 && g(2, 0) == 0; }

RepWitness pqk_normal_form(const Mat3Mod& g) {
    const std::uint32_t mod = g.mod;
    if (!g.invertible()) throw std::invalid_argument("pqk_normal_form needs an invertible input");
    const std::uint32_t mask = mod_mask(mod);

    Mat3Mod cur = g;
    Mat3Mod left = Mat3Mod::identity(mod);   // accumulated P witness
    Mat3Mod right = Mat3Mod::identity(mod);  // accumulated Q witness

    auto lmul = [&](const Mat3Mod& p, const Mat3Mod& pinv) {
        cur = p * cur;
        left = left * pinv;
    };
    auto rmul = [&](const Mat3Mod& q, const Mat3Mod& qinv) {
        cur = cur * q;
        right = qinv * right;
    };

    std::uint32_t k31 = v2_mod(cur(2, 0), mod);
    RepClass cls;
    if (k31 == 0) {
        cls = RepClass::LongWeyl;
        // clear the first column above the unit (3,1) entry
        std::uint32_t inv = inv_mod(cur(2, 0), mod);
        Mat3Mod p = Mat3Mod::identity(mod), pinv = Mat3Mod::identity(mod);
        p(0, 2) = (mod - (std::uint64_t)cur(0, 0) * inv % mod) & mask;
        p(1, 2) = (mod - (std::uint64_t)cur(1, 0) * inv % mod) & mask;
        pinv(0, 2) = (mod - p(0, 2)) & mask;
        pinv(1, 2) = (mod - p(1, 2)) & mask;
        lmul(p, pinv);
    } else {
        // land the unit in the (1,1) corner
        if ((cur(0, 0) & 1) == 0) {
            Mat3Mod sw = Mat3Mod::identity(mod);
            sw(0, 0) = sw(1, 1) = 0;
            sw(0, 1) = sw(1, 0) = 1;
            lmul(sw, sw);
        }
        // clear (2,1)
        std::uint32_t inv = inv_mod(cur(0, 0), mod);
        Mat3Mod p = Mat3Mod::identity(mod), pinv = Mat3Mod::identity(mod);
        p(1, 0) = (mod - (std::uint64_t)cur(1, 0) * inv % mod) & mask;
        pinv(1, 0) = (mod - p(1, 0)) & mask;
        lmul(p, pinv);

        if (v2_mod(cur(2, 0), mod) >= 32 || (cur(2, 0) & mask) == 0) {
            cls = RepClass::Identity;
        } else {
            std::uint32_t i = v2_mod(cur(2, 0), mod);
            cls = static_cast<RepClass>(static_cast<int>(i) + 1);
            // normalize the odd part of the corner entry by a column scaling
            std::uint32_t w = (cur(2, 0) >> i) & mask;
            std::uint32_t c = inv_mod(w, mod);
            Mat3Mod q = Mat3Mod::identity(mod), qinv = Mat3Mod::identity(mod);
            q(0, 0) = c;
            qinv(0, 0) = w;
            rmul(q, qinv);
        }
        // normalize the unit corner to 1
        std::uint32_t u = cur(0, 0);
        Mat3Mod d = Mat3Mod::identity(mod), dinv = Mat3Mod::identity(mod);
        d(0, 0) = inv_mod(u, mod);
        dinv(0, 0) = u;
        lmul(d, dinv);
    }

    Mat3Mod rep = rep_class_matrix(cls, mod);
    // rep^{-1} * cur lies in Q; fold it into the right witness
    Mat3Mod rep_inv = rep;
    if (cls != RepClass::LongWeyl && cls != RepClass::Identity) {
        rep_inv = Mat3Mod::identity(mod);
        rep_inv(2, 0) = (mod - rep(2, 0)) & mask;
    }
    Mat3Mod q_final = rep_inv * cur;
    RepWitness out{cls, left, q_final * right};

    if (!in_P(out.left) || !in_Q(out.right))
        throw std::logic_error("pqk_normal_form: witness landed outside P x Q");
    if (!(out.left * rep * out.right == g))
        throw std::logic_error("pqk_normal_form: witness does not reproduce the input");
    return out;
}

namespace {

RepClass expected_class(const Mat3Mod& g) {
    std::uint32_t k = g.mod;
    std::uint32_t kbits = 0;
    while ((1u << kbits) < k) ++kbits;
    std::uint32_t v = v2_mod(g(2, 0), g.mod);
    if (v == 0) return RepClass::LongWeyl;
    if (v >= kbits) return RepClass::Identity;
    return static_cast<RepClass>(static_cast<int>(v) + 1);
}

}  // namespace

AuditReport audit_normal_form_random(std::size_t samples, std::uint64_t seed,
                                     std::uint32_t mod) {
    AuditReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> dist(0, mod - 1);
    for (std::size_t s = 0; s < samples; ++s) {
        Mat3Mod g{mod, {}};
        do {
            for (auto& x : g.a) x = dist(rng);
        } while (!g.invertible());
        ++rep.samples;
        try {
            RepWitness w = pqk_normal_form(g);
            if (w.rep != expected_class(g)) {
                ++rep.failures;
                if (rep.detail.empty()) rep.detail = "class invariant mismatch";
                continue;
            }
            ++rep.hits[static_cast<int>(w.rep)];
        } catch (const std::exception& e) {
            ++rep.failures;
            if (rep.detail.empty()) rep.detail = e.what();
        }
    }
    return rep;
}

AuditReport audit_normal_form_exhaustive(std::uint32_t mod) {
    AuditReport rep;
    std::size_t total = 1;
    for (int i = 0; i < 9; ++i) total *= mod;
    std::size_t bruhat_q = 0, bruhat_s1 = 0, bruhat_s2 = 0;
    for (std::size_t code = 0; code < total; ++code) {
        Mat3Mod g{mod, {}};
        std::size_t c = code;
        for (auto& x : g.a) {
            x = static_cast<std::uint32_t>(c % mod);
            c /= mod;
        }
        if (!g.invertible()) continue;
        ++rep.samples;
        try {
            RepWitness w = pqk_normal_form(g);
            if (w.rep != expected_class(g)) {
                ++rep.failures;
                continue;
            }
            ++rep.hits[static_cast<int>(w.rep)];
        } catch (const std::exception& e) {
            ++rep.failures;
            if (rep.detail.empty()) rep.detail = e.what();
        }
        if ((g(2, 0) & 1) == 1)
            ++bruhat_s2;
        else if ((g(1, 0) & 1) == 1)
            ++bruhat_s1;
        else
            ++bruhat_q;
    }
    std::ostringstream os;
    os << "bruhat cells mod 2: Q=" << bruhat_q << " s1=" << bruhat_s1 << " s2=" << bruhat_s2;
    rep.detail = os.str();
    return rep;
}

K7AuditReport verify_k7_characterization(std::size_t samples, std::uint64_t seed) {
    K7AuditReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(0, (1 << 16) - 1);
    const AlphaDatum alpha{-1, 0};
    for (std::size_t s = 0; s < samples; ++s) {
        long a = 2 * dist(rng) + 1;
        long d = 2 * dist(rng) + 1;
        long b = dist(rng) - (1 << 15);
        long c = dist(rng) - (1 << 15);
        ++rep.samples;
        Mat2q conj;  // diag(8,1) [[a,b],[128c,d]] diag(8,1)^{-1}
        conj(0, 0) = Rat(a);
        conj(0, 1) = Rat(8 * b);
        conj(1, 0) = Rat(16 * c);
        conj(1, 1) = Rat(d);
        bool member = in_J_alpha(conj, alpha);
        bool expected = ((a - d) % 4 + 4) % 4 == 0;
        if (member != expected) {
            ++rep.failures;
            if (rep.counterexample.empty()) {
                std::ostringstream os;
                os << "a=" << a << " b=" << b << " c=" << c << " d=" << d << " member="
                   << member;
                rep.counterexample = os.str();
            }
            continue;
        }
        if (member) {
            ++rep.members;
            // well-definedness factor psi(2 a^{-1} (bD + c)) must be trivial
            Rat arg = Rat(2 * (b * alpha.D + c), a);
            arg.canonicalize();
            if (!(psi(arg) == RootOfUnity::one())) {
                ++rep.failures;
                if (rep.counterexample.empty()) rep.counterexample = "psi factor nontrivial";
            }
        }
    }
    return rep;
}

GaussRat alpha_sign_test(int D) {
    if (D != 1 && D != -1) throw std::invalid_argument("D must be +-1");
    AlphaDatum a{D, 0};
    Mat2q x1 = mat2_from_string("1,2;4,1");
    Mat2q x2 = mat2_from_string("1,-2;-4,1");
    auto v1 = psi_alpha(a, x1).to_gauss();
    auto v2 = psi_alpha(a, x2).to_gauss();
    if (!v1 || !v2) throw std::logic_error("alpha sign test left Q(i)");
    return *v1 + *v2;
}

GaussRat r_sum_check() {
    GaussRat sum(0);
    for (long r : {1L, 3L, 5L, 7L}) {
        Rat arg(r * r - 1, 4 * r * (2 * r - 1));
        arg.canonicalize();
        auto v = psi(arg).to_gauss();
        if (!v) throw std::logic_error("r-sum term left Q(i)");
        sum += *v;
    }
    return sum;
}

LambdaChain lambda_chain(const EigenReport& report, bool conjugate_psi) {
    auto value_of = [&](const std::string& prefix) -> GaussRat {
        for (const auto& line : report.lines)
            if (line.name.rfind(prefix, 0) == 0) return line.value;
        throw InconsistentInputs("missing eigenvalue line: " + prefix);
    };
    GaussRat a1 = value_of("diag(2,2,1)");
    GaussRat a2 = value_of("diag(2,1,1)");
    GaussRat a3 = value_of("unipotent(64)");
    GaussRat a4 = value_of("block(36,1;128,4)");
    GaussRat a5 = value_of("block(8,1;128,8)");
    GaussRat a6 = value_of("weyl(-128)");
    GaussRat a7 = value_of("central");

    if (a7 != GaussRat(1)) throw InconsistentInputs("central eigenvalue must be 1");
    if (!a2.is_zero()) throw InconsistentInputs("diag(2,1,1) eigenvalue must vanish");
    if (a3 != GaussRat(-1)) throw InconsistentInputs("unipotent eigenvalue must be -1");
    if (a1 * a1 != GaussRat(-4))
        throw InconsistentInputs("diag(2,2,1) eigenvalue must be +-2i");
    if (a4 != GaussRat(8)) throw InconsistentInputs("mod-4 block eigenvalue must be 8");
    if (a5 != GaussRat(32)) throw InconsistentInputs("mod-8 block eigenvalue must be 32");

    LambdaChain chain;
    // 2i = 4 chi(2)^{-1}
    chain.chi2 = GaussRat(4) / a1;

    // the alpha sign constraint: 8F = 4(sum of two psi_alpha values)
    if (alpha_sign_test(-1) * GaussRat(4) != a4 ||
        alpha_sign_test(1) * GaussRat(4) != -a4)
        throw InconsistentInputs("alpha sign test disagrees with the block eigenvalue");

    // 32F = 8 * (r-sum) * F(8 1; 16 1)
    GaussRat rs = r_sum_check();
    GaussRat f81 = (a5 / GaussRat(8)) / rs;
    if (f81 != GaussRat(1)) throw InconsistentInputs("support value F(8 1;16 1) must be 1");

    GaussRat psi_half = conjugate_psi ? GaussRat(0, -1) : GaussRat(0, 1);
    chain.lambda_u = psi_half * f81;
    chain.psi_half = gauss_to_string(psi_half);

    // (a6/128) = chi(8)^{-1} lambda_w, chi(8) = chi(2)^3
    GaussRat chi8 = chain.chi2 * chain.chi2 * chain.chi2;
    chain.lambda_w = (a6 / GaussRat(Rat(128))) * chi8;
    return chain;
}

namespace {

Rat rat_pow2(long e) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e >= 0 ? e : -e));
    if (e >= 0) return Rat(p);
    Rat q(1, p);
    q.canonicalize();
    return q;
}

Mat3q diag3(const Rat& a, const Rat& b, const Rat& c) {
    Mat3q m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

Mat3q unipotent(const Rat& u12, const Rat& u13, const Rat& u23) {
    Mat3q m = Mat3q::identity();
    m(0, 1) = u12;
    m(0, 2) = u13;
    m(1, 2) = u23;
    return m;
}

Mat3q s_block(long n, long i, long j, long x, long y, long z) {
    Mat3q d = diag3(rat_pow2(n), rat_pow2(n - i), rat_pow2(i));
    Mat3q u = unipotent(rat_pow2(-i) * x, rat_pow2(i - n) * y + rat_pow2(j - n) * Rat(x) * z,
                        rat_pow2(i + j - n) * z);
    return d * u;
}

}  // namespace

bool recursion_identity_a(long n, long i, long j, long x, long y, long z, long yp, long zp) {
    Mat3q first;  // [[2,0,y'],[0,2,z'],[0,0,1]]
    first(0, 0) = 2;
    first(0, 2) = Rat(yp);
    first(1, 1) = 2;
    first(1, 2) = Rat(zp);
    first(2, 2) = 1;
    Mat3q lhs = first * s_block(n, i, j, x, y, z);

    Rat znew = rat_pow2(i + j - (n + 1)) * (Rat(2 * z) + rat_pow2(i - j) * zp);
    Rat ynew = rat_pow2(i - (n + 1)) * Rat(2 * y + yp - x * zp) +
               rat_pow2(j - (n + 1)) * Rat(x) * (Rat(2 * z) + rat_pow2(i - j) * zp);
    Mat3q rhs = diag3(rat_pow2(n + 1), rat_pow2(n + 1 - i), rat_pow2(i)) *
                unipotent(rat_pow2(-i) * x, ynew, znew);
    return lhs == rhs;
}

bool recursion_identity_b(long n, long i, long j, long x, long y, long z, long xp) {
    Mat3q first;  // [[2,x',0],[0,1,0],[0,0,2]]
    first(0, 0) = 2;
    first(0, 1) = Rat(xp);
    first(1, 1) = 1;
    first(2, 2) = 2;
    Mat3q lhs = first * s_block(n, i, j, x, y, z);

    Mat3q rhs = diag3(rat_pow2(n + 1), rat_pow2(n - i), rat_pow2(i + 1)) *
                unipotent(rat_pow2(-i - 1) * Rat(2 * x + xp),
                          rat_pow2(i - n) * y + rat_pow2(j - (n + 1)) * Rat(2 * x + xp) * z,
                          rat_pow2(i + j - n) * z);
    return lhs == rhs;
}

bool recursion_multiplicities(long n, long i, long j) {
    if (!(0 <= j && j <= std::min(i, n - i) && i <= n)) return false;
    long xr = 1L << i, yr = 1L << (n - i), zr = 1L << (n - i - j);

    // first family: (y', z') insertions
    {
        long inew = i, jnew = (i > j) ? j + 1 : j;
        long expect = (i > j) ? 2 : 1;
        long Yr = 1L << (n + 1 - inew), Zr = 1L << (n + 1 - inew - jnew);
        std::map<std::tuple<long, long, long>, long> counts;
        for (long x = 0; x < xr; ++x)
            for (long y = 0; y < yr; ++y)
                for (long z = 0; z < zr; ++z)
                    for (long yp = 0; yp <= 1; ++yp)
                        for (long zp = 0; zp <= 1; ++zp) {
                            if (!recursion_identity_a(n, i, j, x, y, z, yp, zp)) return false;
                            long zfull = 2 * z + (1L << (i - j)) * zp;
                            long znew = (i > j) ? zfull / 2 : zfull;  // 2^{i-j-1} z' absorbed
                            long ynew = 2 * y + yp - x * zp;
                            long Y = ((ynew % Yr) + Yr) % Yr;
                            long Z = ((znew % Zr) + Zr) % Zr;
                            ++counts[{x, Y, Z}];
                        }
        for (const auto& [label, c] : counts)
            if (c != expect) return false;
        long total = xr * yr * zr * 4;
        if (static_cast<long>(counts.size()) * expect != total) return false;
    }

    // second family: x' insertions, lands in S(n+1, i+1, j)
    {
        long Xr = 1L << (i + 1);
        std::map<std::tuple<long, long, long>, long> counts;
        for (long x = 0; x < xr; ++x)
            for (long y = 0; y < yr; ++y)
                for (long z = 0; z < zr; ++z)
                    for (long xp = 0; xp <= 1; ++xp) {
                        if (!recursion_identity_b(n, i, j, x, y, z, xp)) return false;
                        long X = (2 * x + xp) % Xr;
                        ++counts[{X, y, z}];
                    }
        for (const auto& [label, c] : counts)
            if (c != 1) return false;
        if (static_cast<long>(counts.size()) != xr * 2 * yr * zr) return false;
    }
    return true;
}

}  // namespace hecke3
