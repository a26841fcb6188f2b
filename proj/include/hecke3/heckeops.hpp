#pragma once

#include <string>
#include <vector>

#include "hecke3/relspace.hpp"
#include "hecke3/symreduce.hpp"

namespace hecke3 {

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};
struct ProbeRankDeficient : std::runtime_error {
    explicit ProbeRankDeficient(const std::string& what) : std::runtime_error(what) {}
};
struct AnchorNotFound : std::runtime_error {
    explicit AnchorNotFound(const std::string& what) : std::runtime_error(what) {}
};

struct HeckeElement {
    Mat3q alpha;
    explicit HeckeElement(const Mat3q& a) : alpha(a) {
        if (det3(a) == 0) throw std::invalid_argument("Hecke element must be nonsingular");
    }
    static HeckeElement parse(const std::string& s) { return HeckeElement(mat3_from_string(s)); }
    std::string str() const { return mat3_to_string(alpha); }
};

struct CosetDecomposition {
    HeckeElement alpha;
    Level level;
    std::vector<Mat3q> reps;
    bool verified = false;
};

// Membership in the compact level group: p-integral entries, unit determinant
// and the (2,1),(3,1) congruence at each prime dividing the level; extra
// moduli add integrality and unit-determinant conditions at their primes.
bool in_K(const Mat3q& g, const Level& level, const std::vector<Int>& extra_moduli = {});

// gK = hK with respect to the level group localized at the primes of the
// level, det(alpha) and all entry denominators.
bool coset_equivalent(const Mat3q& g, const Mat3q& h, const Level& level,
                      const std::vector<Int>& extra_moduli = {});

// Canonical key of the right coset gK for matrices with denominators only at
// the relevant primes; two such cosets are equal iff the keys match.
std::string coset_key(const Mat3q& g, const Level& level);

// Integral generators of the level group (elementary matrices adapted to the
// level plus sign diagonals).
std::vector<Mat3q> level_group_generators(const Level& level);
// The same set extended by CRT-lifted unit diagonals modulo
// prod p^(v_p(level) + |v_p(det alpha)| + 2); these generate the image of the
// full compact group at that modulus.
std::vector<Mat3q> compact_group_generators(const Level& level, const HeckeElement& alpha);

// (a) reps pairwise inequivalent, (b) each generator * rep lands in some
// rep coset, (c) alpha itself covered; together these certify the double
// coset decomposition.
bool verify_decomposition(CosetDecomposition& candidate,
                          const std::vector<Mat3q>& generators = {});

CosetDecomposition enumerate_decomposition(const HeckeElement& alpha, const Level& level,
                                           std::size_t budget = 10000);

enum class ActionSide { Right, Left };

struct ActionConvention {
    ActionSide side = ActionSide::Right;
    PairingKind pairing = PairingKind::FirstColumn;
};

// Frozen action convention, calibrated once against the level-128 anchor
// eigenvalue; see detect_action_convention.
extern const ActionConvention kActionConvention;

// Matrix of T_alpha on the model basis via probe evaluation: column b holds
// the coordinates of T(f_b).  Probe points are the basis pivots plus
// verification probes; the result is checked on the extra probes.
DenseQ hecke_matrix(const HeckeElement& alpha, const ModelBasis& basis,
                    const CosetDecomposition& decomp, const PointTable& table,
                    const ActionConvention& conv = kActionConvention);

// Evaluation of T_alpha on an arbitrary complex model vector at one point.
GaussRat hecke_apply_at(const HeckeElement& alpha, const CosetDecomposition& decomp,
                        const std::vector<GaussRat>& values, const PointTable& table,
                        std::size_t point_index, const ActionConvention& conv = kActionConvention);

struct PaperOperator {
    std::string name;
    HeckeElement alpha;
    std::vector<Mat3q> reps;  // empty: enumerate
    GaussRat expected;        // up to global conjugation
};

// The seven level-128 operators with their published coset representatives.
std::vector<PaperOperator> paper_operators();

std::vector<Mat3q> reps_diag221();
std::vector<Mat3q> reps_diag211();
std::vector<Mat3q> reps_unipotent64();
std::vector<Mat3q> reps_mod4_block_family();  // 48 reps indexed by SL2(Z/4)
std::vector<Mat3q> reps_mod8_block_family();  // 384 reps indexed by SL2(Z/8)
std::vector<Mat3q> reps_weyl_element();       // 128 + 64 reps

struct EigenLine {
    std::string name;
    std::string alpha;
    GaussRat value;
};

struct EigenReport {
    Level level;
    std::string anchor_alpha;
    GaussRat anchor_eigenvalue;
    bool conjugated = false;  // anchor landed on the conjugate branch
    std::string convention;
    std::vector<EigenLine> lines;
    std::string to_json() const;
};

EigenReport eigenreport(const ModelBasis& basis, const PointTable& table);

// Calibration helper: returns the conventions under which the anchor
// eigenvalue has a one-dimensional eigenspace at the given level.
std::vector<ActionConvention> detect_action_convention(const ModelBasis& basis,
                                                       const PointTable& table);

}  // namespace hecke3
