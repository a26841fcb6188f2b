#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hecke3/mat.hpp"
#include "hecke3/rational.hpp"

namespace hecke3 {

struct NonUnimodular : std::domain_error {
    explicit NonUnimodular(const std::string& what) : std::domain_error(what) {}
};

struct Level {
    std::uint32_t N;
    explicit Level(std::uint32_t n) : N(n) {
        if (n < 1) throw std::invalid_argument("level must be >= 1");
    }
    bool operator==(const Level& o) const { return N == o.N; }
};

// Canonical representative of a point of P^2(Z/N): the lexicographically
// smallest triple among all unit-scalar multiples mod N.
struct ProjPoint {
    std::uint32_t x = 0, y = 0, z = 0;
    bool operator==(const ProjPoint& o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator<(const ProjPoint& o) const {
        if (x != o.x) return x < o.x;
        if (y != o.y) return y < o.y;
        return z < o.z;
    }
};

ProjPoint normalize(long long x, long long y, long long z, const Level& level);
ProjPoint normalize(const Int& x, const Int& y, const Int& z, const Level& level);

// Number of points of P^2(Z/N): N^2 * prod_{p|N} (1 + 1/p + 1/p^2).
Int proj_point_count(std::uint32_t N);

std::vector<Int> prime_factors(const Int& n);

class PointTable {
   public:
    explicit PointTable(Level level);

    const Level& level() const { return level_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<ProjPoint>& points() const { return points_; }
    const ProjPoint& point(std::size_t i) const { return points_[i]; }

    std::size_t index_of(const ProjPoint& p) const;
    // Canonicalizes and looks up in one step; O(1) via the precomputed map.
    std::size_t index_of_triple(long long x, long long y, long long z) const;

    void write(std::ostream& os) const;
    static PointTable read(std::istream& is);

   private:
    PointTable(Level level, std::vector<ProjPoint> pts);
    void build_lookup();

    Level level_;
    std::vector<ProjPoint> points_;
    // flat canonical-index table over all triples, built for moderate N
    std::vector<std::int32_t> lookup_;
    std::unordered_map<std::uint64_t, std::int32_t> lookup_map_;
    bool use_flat_ = false;
};

// Returns U in SL3(Z) with det U = 1 whose first column is congruent to a
// unit multiple of q mod N.
Mat3z lift_point(const ProjPoint& q, const Level& level);

}  // namespace hecke3
