#pragma once

#include <iosfwd>

#include "hecke3/linalg.hpp"
#include "hecke3/projspace.hpp"

namespace hecke3 {

// Linear relations cutting out the model space inside functions on P^2(Z/N):
// three relation families instantiated at every point, rows in (point, family)
// order.
struct RelationSystem {
    Level level;
    const PointTable* table;
    SparseMat matrix;
};

struct ModelBasis {
    Level level;
    std::size_t npoints = 0;
    std::size_t dim = 0;
    // dense function vectors indexed by PointTable ordinals, canonical echelon
    // form with ascending pivots
    DenseQ vectors;
    std::vector<std::size_t> pivots;

    void write(std::ostream& os) const;
    static ModelBasis read(std::istream& is);
    std::string content_hash() const;
};

RelationSystem build_relations(const PointTable& table);

struct SolveOptions {
    bool force_multimodular = false;
    bool reverse_point_order = false;  // ordering-independence checks
};

ModelBasis solve_model(const RelationSystem& system, const SolveOptions& opts = {});

bool check_membership(const std::vector<Rat>& v, const RelationSystem& system);
bool check_membership(const std::vector<GaussRat>& v, const RelationSystem& system);

}  // namespace hecke3
