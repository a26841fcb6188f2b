#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "hecke3/mat.hpp"
#include "hecke3/projspace.hpp"

namespace hecke3 {

struct ReductionStall : std::runtime_error {
    explicit ReductionStall(const std::string& what) : std::runtime_error(what) {}
};

// A modular symbol: three primitive integer columns, each sign-normalized so
// its first nonzero entry is positive.  The class is invariant under scaling
// any column by a nonzero rational.
struct ModularSymbol {
    Mat3z cols;

    ModularSymbol() : cols(Mat3z::identity()) {}
    explicit ModularSymbol(const Mat3z& m);
    explicit ModularSymbol(const Mat3q& m);

    Int det() const { return det3(cols); }
    std::string key() const;
    bool operator==(const ModularSymbol& o) const { return cols == o.cols; }
    bool operator<(const ModularSymbol& o) const { return key() < o.key(); }

    ModularSymbol with_column(std::size_t j, const std::array<Int, 3>& v) const;
    ModularSymbol swapped(std::size_t i, std::size_t j) const;
};

Int symbol_det(const ModularSymbol& s);

// Formal integer combination of unimodular symbols (|det| = 1), like terms
// merged.
struct SymbolSum {
    std::vector<std::pair<Int, ModularSymbol>> terms;
};

enum class ReduceStrategy {
    Barycentric,     // rounded interior points ranked by worst sub-determinant
    FloorCentric,    // floored interior points ranked by total sub-determinant
    ExhaustiveSmall  // first admissible vector in expanding max-norm shells
};

struct ReduceStats {
    std::size_t nodes = 0;
    std::size_t max_depth = 0;
};

SymbolSum reduce(const ModularSymbol& s, ReduceStrategy strategy = ReduceStrategy::Barycentric,
                 std::ostream* trace = nullptr, ReduceStats* stats = nullptr);

// FirstColumn evaluates f at the first column of the symbol; InverseColumn at
// the first column of its inverse (the top cofactor vector).  The inverse map
// turns column operations into the point maps of the model relations, which
// makes the pairing reduction-independent.
enum class PairingKind { FirstColumn, InverseColumn };

// Pairing of a model vector with a unimodular symbol: when det = -1 swap the
// last two columns and negate, then evaluate f at the pairing point mod N.
GaussRat pairing(const std::vector<GaussRat>& f, const ModularSymbol& s, const PointTable& table,
                 PairingKind kind = PairingKind::FirstColumn);
Rat pairing(const std::vector<Rat>& f, const ModularSymbol& s, const PointTable& table,
            PairingKind kind = PairingKind::FirstColumn);

// Pairing extended to arbitrary symbols through the reduction; 0 on
// degenerate symbols.
GaussRat pair_rational(const std::vector<GaussRat>& f, const ModularSymbol& s,
                       const PointTable& table,
                       ReduceStrategy strategy = ReduceStrategy::Barycentric,
                       PairingKind kind = PairingKind::FirstColumn);
Rat pair_rational(const std::vector<Rat>& f, const ModularSymbol& s, const PointTable& table,
                  ReduceStrategy strategy = ReduceStrategy::Barycentric,
                  PairingKind kind = PairingKind::FirstColumn);

// The linear functional f -> pair_rational(f, s) as a sparse vector over
// point ordinals; independent of f, so it can be applied to many vectors.
std::vector<std::pair<std::size_t, Int>> reduce_functional(
    const ModularSymbol& s, const PointTable& table,
    ReduceStrategy strategy = ReduceStrategy::Barycentric,
    PairingKind kind = PairingKind::FirstColumn);

void clear_reduction_cache();

}  // namespace hecke3
