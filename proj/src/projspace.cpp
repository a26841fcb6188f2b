#include "hecke3/projspace.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hecke3/sha256.hpp"
#include <json.hpp>

namespace hecke3 {

namespace {

inline std::uint32_t mod_reduce(long long v, std::uint32_t N) {
    long long r = v % static_cast<long long>(N);
    if (r < 0) r += N;
    return static_cast<std::uint32_t>(r);
}

inline std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b) {
    while (b) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

ProjPoint normalize(long long x, long long y, long long z, const Level& level) {
    const std::uint32_t N = level.N;
    if (N == 1) return ProjPoint{0, 0, 0};
    std::uint32_t a = mod_reduce(x, N), b = mod_reduce(y, N), c = mod_reduce(z, N);
    std::uint64_t g = gcd_u(gcd_u(a, b), gcd_u(c, N));
    if (g != 1) {
        std::ostringstream msg;
        msg << "triple (" << x << "," << y << "," << z << ") is not unimodular mod " << N;
        throw NonUnimodular(msg.str());
    }
    ProjPoint best{N, N, N};
    for (std::uint32_t u = 1; u < N; ++u) {
        if (gcd_u(u, N) != 1) continue;
        ProjPoint cand{static_cast<std::uint32_t>((std::uint64_t)u * a % N),
                       static_cast<std::uint32_t>((std::uint64_t)u * b % N),
                       static_cast<std::uint32_t>((std::uint64_t)u * c % N)};
        if (cand < best) best = cand;
    }
    return best;
}

ProjPoint normalize(const Int& x, const Int& y, const Int& z, const Level& level) {
    Int n(level.N);
    auto red = [&](const Int& v) {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        return r.get_ui();
    };
    if (level.N == 1) return ProjPoint{0, 0, 0};
    return normalize((long long)red(x), (long long)red(y), (long long)red(z), level);
}

std::vector<Int> prime_factors(const Int& n) {
    std::vector<Int> out;
    Int m = abs(n);
    for (Int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            out.push_back(p);
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) out.push_back(m);
    return out;
}

Int proj_point_count(std::uint32_t N) {
    // N^2 * prod (1 + 1/p + 1/p^2) computed exactly.
    Rat count(Int(N) * Int(N));
    for (const Int& p : prime_factors(Int(N))) {
        Rat f = Rat(1) + Rat(1, p) + Rat(1, p * p);
        count *= f;
    }
    if (count.get_den() != 1) throw std::logic_error("point count is not an integer");
    return Int(count.get_num());
}

PointTable::PointTable(Level level) : level_(level) {
    const std::uint32_t N = level_.N;
    std::vector<ProjPoint> pts;
    if (N == 1) {
        pts.push_back(ProjPoint{0, 0, 0});
    } else {
        std::vector<bool> seen((std::size_t)N * N * N, false);
        std::vector<std::uint32_t> units;
        for (std::uint32_t u = 1; u < N; ++u)
            if (gcd_u(u, N) == 1) units.push_back(u);
        for (std::uint32_t x = 0; x < N; ++x)
            for (std::uint32_t y = 0; y < N; ++y)
                for (std::uint32_t z = 0; z < N; ++z) {
                    std::size_t code = ((std::size_t)x * N + y) * N + z;
                    if (seen[code]) continue;
                    if (gcd_u(gcd_u(x, y), gcd_u(z, N)) != 1) continue;
                    // x,y,z is lexicographically first in its orbit: mark the
                    // whole unit orbit and keep this representative.
                    for (std::uint32_t u : units) {
                        std::size_t c2 = (((std::size_t)((std::uint64_t)u * x % N)) * N +
                                          (std::uint64_t)u * y % N) *
                                             N +
                                         (std::uint64_t)u * z % N;
                        seen[c2] = true;
                    }
                    pts.push_back(ProjPoint{x, y, z});
                }
    }
    points_ = std::move(pts);
    build_lookup();
}

PointTable::PointTable(Level level, std::vector<ProjPoint> pts)
    : level_(level), points_(std::move(pts)) {
    build_lookup();
}

void PointTable::build_lookup() {
    const std::uint32_t N = level_.N;
    use_flat_ = (std::size_t)N * N * N <= (1u << 21);
    if (use_flat_) lookup_.assign((std::size_t)N * N * N, -1);
    std::vector<std::uint32_t> units;
    for (std::uint32_t u = 1; u < std::max<std::uint32_t>(N, 2); ++u)
        if (gcd_u(u, N) == 1) units.push_back(u);
    if (N == 1) units.push_back(0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        for (std::uint32_t u : units) {
            std::uint64_t x = (std::uint64_t)u * p.x % std::max<std::uint32_t>(N, 1);
            std::uint64_t y = (std::uint64_t)u * p.y % std::max<std::uint32_t>(N, 1);
            std::uint64_t z = (std::uint64_t)u * p.z % std::max<std::uint32_t>(N, 1);
            std::uint64_t code = (x * N + y) * N + z;
            if (use_flat_)
                lookup_[code] = static_cast<std::int32_t>(i);
            else
                lookup_map_[code] = static_cast<std::int32_t>(i);
        }
    }
}

std::size_t PointTable::index_of(const ProjPoint& p) const {
    return index_of_triple(p.x, p.y, p.z);
}

std::size_t PointTable::index_of_triple(long long x, long long y, long long z) const {
    const std::uint32_t N = level_.N;
    if (N == 1) return 0;
    std::uint64_t a = mod_reduce(x, N), b = mod_reduce(y, N), c = mod_reduce(z, N);
    std::uint64_t code = (a * N + b) * N + c;
    std::int32_t idx;
    if (use_flat_) {
        idx = lookup_[code];
    } else {
        auto it = lookup_map_.find(code);
        idx = (it == lookup_map_.end()) ? -1 : it->second;
    }
    if (idx < 0) {
        std::ostringstream msg;
        msg << "triple (" << x << "," << y << "," << z << ") is not unimodular mod " << N;
        throw NonUnimodular(msg.str());
    }
    return static_cast<std::size_t>(idx);
}

void PointTable::write(std::ostream& os) const {
    std::ostringstream body;
    for (const auto& p : points_) body << p.x << "," << p.y << "," << p.z << "\n";
    std::string body_str = body.str();
    nlohmann::json header = {{"schema", "hecke3/points"},
                             {"version", 1},
                             {"level", level_.N},
                             {"count", points_.size()},
                             {"sha256", sha256_hex(body_str)}};
    os << header.dump() << "\n" << body_str;
}

PointTable PointTable::read(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("point table: missing header");
    auto header = nlohmann::json::parse(line);
    if (header.at("schema") != "hecke3/points" || header.at("version") != 1)
        throw std::runtime_error("point table: unsupported schema");
    Level level(header.at("level").get<std::uint32_t>());
    std::size_t count = header.at("count").get<std::size_t>();
    std::string body, expect_sha = header.at("sha256").get<std::string>();
    std::vector<ProjPoint> pts;
    pts.reserve(count);
    while (std::getline(is, line)) {
        body += line + "\n";
        std::uint32_t x, y, z;
        char c1, c2;
        std::istringstream ls(line);
        if (!(ls >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',')
            throw std::runtime_error("point table: malformed row");
        pts.push_back(ProjPoint{x, y, z});
    }
    if (pts.size() != count) throw std::runtime_error("point table: row count mismatch");
    if (sha256_hex(body) != expect_sha) throw std::runtime_error("point table: hash mismatch");
    return PointTable(level, std::move(pts));
}

namespace {

// Extended gcd: returns g and sets s,t with s*a + t*b = g.
Int ext_gcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

}  // namespace

Mat3z lift_point(const ProjPoint& q, const Level& level) {
    const Int N(level.N);
    // Choose an integer lift that is primitive over Z.  The canonical triple
    // is unimodular mod N, so adding multiples of N makes the gcd 1.
    Int x(q.x), y(q.y), z(q.z);
    {
        Int g = gcd(gcd(x, y), z);
        for (int a = 0; g != 1 && a < 4; ++a)
            for (int b = 0; g != 1 && b < 4; ++b)
                for (int c = 0; g != 1 && c < 4; ++c) {
                    Int xx = Int(q.x) + a * N, yy = Int(q.y) + b * N, zz = Int(q.z) + c * N;
                    if (xx == 0 && yy == 0 && zz == 0) continue;
                    g = gcd(gcd(xx, yy), zz);
                    if (g == 1) {
                        x = xx;
                        y = yy;
                        z = zz;
                    }
                }
        if (g != 1) throw std::logic_error("lift_point: no primitive lift found");
    }

    // Complete the primitive column (x,y,z) to a basis: with s*x + t*y = g1
    // and u*g1 + v*z = 1, the two columns below give determinant 1.
    Int s, t, u, v;
    Int g1 = ext_gcd(x, y, s, t);
    ext_gcd(g1, z, u, v);

    Mat3z m;
    m(0, 0) = x;
    m(1, 0) = y;
    m(2, 0) = z;
    if (g1 == 0) {
        // x = y = 0, z = +-1
        m(0, 1) = 1;
        m(1, 1) = 0;
        m(2, 1) = 0;
        m(0, 2) = 0;
        m(1, 2) = z > 0 ? 1 : -1;
        m(2, 2) = 0;
        if (det3(m) != 1) {
            std::swap(m.a[1], m.a[2]);
            std::swap(m.a[4], m.a[5]);
            std::swap(m.a[7], m.a[8]);
        }
    } else {
        m(0, 1) = -t;
        m(1, 1) = s;
        m(2, 1) = 0;
        m(0, 2) = -v * (x / g1);
        m(1, 2) = -v * (y / g1);
        m(2, 2) = u;
    }
    Int d = det3(m);
    if (d == -1) {
        m(0, 1) = -m(0, 1);
        m(1, 1) = -m(1, 1);
        m(2, 1) = -m(2, 1);
        d = det3(m);
    }
    if (d != 1) throw std::logic_error("lift_point: completion failed");
    return m;
}

}  // namespace hecke3
