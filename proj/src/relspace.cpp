#include "hecke3/relspace.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hecke3/sha256.hpp"
#include <json.hpp>

namespace hecke3 {

RelationSystem build_relations(const PointTable& table) {
    const Level& level = table.level();
    const std::size_t n = table.size();
    std::vector<Triplet> trips;
    trips.reserve(8 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const ProjPoint& p = table.point(i);
        long long x = p.x, y = p.y, z = p.z;
        std::size_t row = 3 * i;
        // f(x:y:z) + f(-y:x:z) = 0
        trips.push_back({row, i, GaussRat(1)});
        trips.push_back({row, table.index_of_triple(-y, x, z), GaussRat(1)});
        // f(x:y:z) - f(z:x:y) = 0
        trips.push_back({row + 1, i, GaussRat(1)});
        trips.push_back({row + 1, table.index_of_triple(z, x, y), GaussRat(-1)});
        // f(x:y:z) + f(-y:x-y:z) + f(y-x:-x:z) = 0
        trips.push_back({row + 2, i, GaussRat(1)});
        trips.push_back({row + 2, table.index_of_triple(-y, x - y, z), GaussRat(1)});
        trips.push_back({row + 2, table.index_of_triple(y - x, -x, z), GaussRat(1)});
    }
    return RelationSystem{level, &table, SparseMat::from_triplets(3 * n, n, std::move(trips))};
}

ModelBasis solve_model(const RelationSystem& system, const SolveOptions& opts) {
    KernelOptions kopts;
    kopts.force_multimodular = opts.force_multimodular;
    std::vector<std::size_t> perm;
    if (opts.reverse_point_order) {
        perm.resize(system.matrix.cols);
        std::iota(perm.rbegin(), perm.rend(), 0);
        kopts.column_perm = &perm;
    }
    DenseG basis = kernel(system.matrix, kopts);

    ModelBasis out{system.level};
    out.npoints = system.matrix.cols;
    out.dim = basis.size();
    out.vectors.reserve(basis.size());
    for (auto& row : basis) {
        std::vector<Rat> v(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j].im != 0) throw std::logic_error("model basis must be rational");
            v[j] = row[j].re;
        }
        out.vectors.push_back(std::move(v));
    }
    for (const auto& v : out.vectors) {
        std::size_t c = 0;
        while (c < v.size() && v[c] == 0) ++c;
        out.pivots.push_back(c);
        if (!check_membership(v, system))
            throw std::logic_error("model basis vector violates the relations");
    }
    return out;
}

bool check_membership(const std::vector<Rat>& v, const RelationSystem& system) {
    if (v.size() != system.matrix.cols) throw std::invalid_argument("membership: bad length");
    auto img = system.matrix.apply(v);
    for (const auto& x : img)
        if (x != 0) return false;
    return true;
}

bool check_membership(const std::vector<GaussRat>& v, const RelationSystem& system) {
    if (v.size() != system.matrix.cols) throw std::invalid_argument("membership: bad length");
    auto img = system.matrix.apply(v);
    for (const auto& x : img)
        if (!x.is_zero()) return false;
    return true;
}

namespace {

std::string basis_body(const ModelBasis& b) {
    std::ostringstream body;
    for (std::size_t i = 0; i < b.vectors.size(); ++i)
        for (std::size_t j = 0; j < b.vectors[i].size(); ++j)
            if (b.vectors[i][j] != 0)
                body << i << "," << j << "," << rat_to_string(b.vectors[i][j]) << "\n";
    return body.str();
}

}  // namespace

std::string ModelBasis::content_hash() const { return sha256_hex(basis_body(*this)); }

void ModelBasis::write(std::ostream& os) const {
    std::string body = basis_body(*this);
    nlohmann::json header = {{"schema", "hecke3/basis"}, {"version", 1},
                             {"level", level.N},        {"dim", dim},
                             {"points", npoints},       {"sha256", sha256_hex(body)}};
    os << header.dump() << "\n" << body;
}

ModelBasis ModelBasis::read(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("basis: missing header");
    auto header = nlohmann::json::parse(line);
    if (header.at("schema") != "hecke3/basis" || header.at("version") != 1)
        throw std::runtime_error("basis: unsupported schema");
    ModelBasis b{Level(header.at("level").get<std::uint32_t>())};
    b.dim = header.at("dim").get<std::size_t>();
    b.npoints = header.at("points").get<std::size_t>();
    b.vectors.assign(b.dim, std::vector<Rat>(b.npoints, Rat(0)));
    std::string body;
    while (std::getline(is, line)) {
        body += line + "\n";
        auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error("basis: malformed row");
        std::size_t i = std::stoull(line.substr(0, c1));
        std::size_t j = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
        b.vectors.at(i).at(j) = rat_from_string(line.substr(c2 + 1));
    }
    if (sha256_hex(body) != header.at("sha256").get<std::string>())
        throw std::runtime_error("basis: hash mismatch");
    for (const auto& v : b.vectors) {
        std::size_t c = 0;
        while (c < v.size() && v[c] == 0) ++c;
        b.pivots.push_back(c);
    }
    return b;
}

}  // namespace hecke3
