#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hecke3/dyadic.hpp"
#include "hecke3/heckeops.hpp"
#include "hecke3/mat.hpp"

namespace hecke3 {

struct InconsistentInputs : std::runtime_error {
    explicit InconsistentInputs(const std::string& what) : std::runtime_error(what) {}
};

// 3x3 matrices over Z/2^k, k <= 30
struct Mat3Mod {
    std::uint32_t mod;
    std::array<std::uint32_t, 9> a{};

    std::uint32_t& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }
    static Mat3Mod identity(std::uint32_t mod);
    Mat3Mod operator*(const Mat3Mod& o) const;
    bool operator==(const Mat3Mod& o) const { return mod == o.mod && a == o.a; }
    std::uint32_t det() const;
    bool invertible() const { return det() % 2 == 1; }
};

// The eight double-coset representatives of P \ GL3(Z/2^k) / Q: identity, the
// long transposition, and the lower-corner unipotents with entry 2^i.
enum class RepClass : int {
    Identity = 0,
    LongWeyl = 1,  // (e3, e2, e1) permutation
    Corner1 = 2,   // 2^1 in position (3,1)
    Corner2 = 3,
    Corner3 = 4,
    Corner4 = 5,
    Corner5 = 6,
    Corner6 = 7,
};

std::string rep_class_name(RepClass c);
Mat3Mod rep_class_matrix(RepClass c, std::uint32_t mod);

struct RepWitness {
    RepClass rep;
    Mat3Mod left;   // element of P = {a31 = a32 = 0}
    Mat3Mod right;  // element of Q = {a21 = a31 = 0}
};

// Constructive reduction of g in GL3(Z/2^k) to its representative with a
// verifying witness: left * rep * right == g.
RepWitness pqk_normal_form(const Mat3Mod& g);

bool in_P(const Mat3Mod& g);
bool in_Q(const Mat3Mod& g);

struct AuditReport {
    std::size_t samples = 0;
    std::size_t failures = 0;
    std::array<std::size_t, 8> hits{};
    std::string detail;
    bool ok() const { return failures == 0; }
};

// Random elements of GL3(Z/2^7) all reduce with verifying witnesses and the
// class invariant (the 2-adic valuation of the (3,1) entry after reduction)
// matches; counts surjectivity onto the eight classes.
AuditReport audit_normal_form_random(std::size_t samples, std::uint64_t seed,
                                     std::uint32_t mod = 128);
// Exhaustive audit over all of GL3(Z/2^k) for k in {1, 3}.
AuditReport audit_normal_form_exhaustive(std::uint32_t mod);

// K7 cap J_alpha characterization: for k = [[a, b],[128c, d]] with a, d units,
// conj(k) = diag(8,1) k diag(8,1)^{-1} lies in J_alpha iff a = d mod 4; on
// members the factor psi(2 a^{-1} (bD + c)) is 1.
struct K7AuditReport {
    std::size_t samples = 0;
    std::size_t members = 0;
    std::size_t failures = 0;
    std::string counterexample;
    bool ok() const { return failures == 0; }
};

K7AuditReport verify_k7_characterization(std::size_t samples, std::uint64_t seed);

// s(D) = psi_{alpha(D,0)}([[1,2],[4,1]]) + psi_{alpha(D,0)}([[1,-2],[-4,1]]);
// the Hecke constraint forces s = 2, selecting D = -1.
GaussRat alpha_sign_test(int D);

// sum over odd r mod 8 of psi((r^2-1)/(4 r (2r-1))); equals 4.
GaussRat r_sum_check();

struct LambdaChain {
    GaussRat chi2;      // unramified character at 2
    GaussRat lambda_u;  // value on [[1,1],[-2,1]]
    GaussRat lambda_w;  // value on [[0,1],[-2,0]]
    std::string psi_half;
};

// Recomputes the character data from the seven reported eigenvalues;
// conjugate_psi selects the rival additive character (all values conjugate).
LambdaChain lambda_chain(const EigenReport& report, bool conjugate_psi = false);

// The two displayed product identities behind the Hecke power recursion,
// checked as exact rational matrix equalities.
bool recursion_identity_a(long n, long i, long j, long x, long y, long z, long yp, long zp);
bool recursion_identity_b(long n, long i, long j, long x, long y, long z, long xp);

// Expansion multiplicities of T * S(n,i,j): (2,1) for i > j and (1,1) for
// i = j, confirmed by counting collisions of normalized coset labels.
bool recursion_multiplicities(long n, long i, long j);

}  // namespace hecke3
