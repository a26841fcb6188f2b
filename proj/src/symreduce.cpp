#include "hecke3/symreduce.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <unordered_map>

namespace hecke3 {

namespace {

void normalize_column(std::array<Int, 3>& c) {
    Int g = gcd(gcd(c[0], c[1]), c[2]);
    if (g == 0) return;  // zero column stays
    if (g != 1)
        for (auto& x : c) x /= g;
    for (const auto& x : c) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : c) y = -y;
        break;
    }
}

std::array<Int, 3> cross(const std::array<Int, 3>& a, const std::array<Int, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Int dot3(const std::array<Int, 3>& a, const std::array<Int, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

ModularSymbol::ModularSymbol(const Mat3z& m) {
    cols = m;
    for (std::size_t j = 0; j < 3; ++j) {
        auto c = cols.col(j);
        normalize_column(c);
        cols.set_col(j, c);
    }
}

ModularSymbol::ModularSymbol(const Mat3q& m) {
    for (std::size_t j = 0; j < 3; ++j) {
        Int den = 1;
        for (std::size_t i = 0; i < 3; ++i) den = lcm(den, Int(m(i, j).get_den()));
        std::array<Int, 3> c;
        for (std::size_t i = 0; i < 3; ++i) {
            Rat s = m(i, j) * Rat(den);
            c[i] = s.get_num();
        }
        normalize_column(c);
        cols.set_col(j, c);
    }
}

std::string ModularSymbol::key() const {
    std::string k;
    for (const auto& x : cols.a) {
        k += x.get_str();
        k.push_back(',');
    }
    return k;
}

ModularSymbol ModularSymbol::with_column(std::size_t j, const std::array<Int, 3>& v) const {
    Mat3z m = cols;
    m.set_col(j, v);
    return ModularSymbol(m);
}

ModularSymbol ModularSymbol::swapped(std::size_t i, std::size_t j) const {
    Mat3z m = cols;
    auto ci = m.col(i), cj = m.col(j);
    m.set_col(i, cj);
    m.set_col(j, ci);
    ModularSymbol out;
    out.cols = m;  // columns already normalized
    return out;
}

Int symbol_det(const ModularSymbol& s) { return s.det(); }

namespace {

struct Candidate {
    std::array<Int, 3> v;
    Int worst;  // max |sub-determinant|
    Int total;  // sum |sub-determinant|
};

bool admissible(const std::array<Int, 3>& v, const std::array<std::array<Int, 3>, 3>& cof,
                const Int& absdet, std::array<Int, 3>* subdets = nullptr) {
    if (v[0] == 0 && v[1] == 0 && v[2] == 0) return false;
    for (std::size_t i = 0; i < 3; ++i) {
        Int d = dot3(v, cof[i]);
        if (abs(d) >= absdet) return false;
        if (subdets) (*subdets)[i] = d;
    }
    return true;
}

const std::vector<std::array<Rat, 3>>& barycenters() {
    static const std::vector<std::array<Rat, 3>> pts = [] {
        std::vector<std::array<Rat, 3>> out;
        auto r = [](long n, long d) { return Rat(n, d); };
        out.push_back({r(1, 3), r(1, 3), r(1, 3)});
        out.push_back({r(1, 2), r(1, 2), r(1, 2)});
        // all nonzero corners of the half-integer cube
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    if (a + b + c == 0 || a + b + c == 3) continue;
                    out.push_back({r(a, 2), r(b, 2), r(c, 2)});
                }
        out.push_back({r(2, 3), r(1, 6), r(1, 6)});
        out.push_back({r(1, 6), r(2, 3), r(1, 6)});
        out.push_back({r(1, 6), r(1, 6), r(2, 3)});
        out.push_back({r(1, 4), r(1, 4), r(1, 2)});
        out.push_back({r(1, 4), r(1, 2), r(1, 4)});
        out.push_back({r(1, 2), r(1, 4), r(1, 4)});
        return out;
    }();
    return pts;
}

Int round_half_up(const Rat& x) {
    // floor(x + 1/2)
    Rat y = x + Rat(1, 2);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), Int(y.get_num()).get_mpz_t(), Int(y.get_den()).get_mpz_t());
    return q;
}

Int floor_rat(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), Int(x.get_num()).get_mpz_t(), Int(x.get_den()).get_mpz_t());
    return q;
}

void make_primitive(std::array<Int, 3>& v) {
    Int g = gcd(gcd(v[0], v[1]), v[2]);
    if (g > 1)
        for (auto& x : v) x /= g;
}

bool lex_less(const std::array<Int, 3>& a, const std::array<Int, 3>& b) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

std::array<Int, 3> exhaustive_search(const ModularSymbol& s,
                                     const std::array<std::array<Int, 3>, 3>& cof,
                                     const Int& absdet) {
    // An admissible vector lies in B * (-1,1)^3 (Minkowski), whose points have
    // coordinates bounded by the row sums of |B|; search shells up to that.
    Int bound = 1;
    for (std::size_t i = 0; i < 3; ++i) {
        Int row = abs(s.cols(i, 0)) + abs(s.cols(i, 1)) + abs(s.cols(i, 2));
        bound = std::max(bound, row);
    }
    for (Int shell = 1; shell <= bound; ++shell) {
        long r = static_cast<long>(shell.get_si());
        for (long a = -r; a <= r; ++a)
            for (long b = -r; b <= r; ++b)
                for (long c = -r; c <= r; ++c) {
                    if (std::max({std::abs(a), std::abs(b), std::abs(c)}) != r) continue;
                    std::array<Int, 3> v{Int(a), Int(b), Int(c)};
                    make_primitive(v);
                    if (admissible(v, cof, absdet)) return v;
                }
    }
    throw ReductionStall("no admissible reducing vector up to bound " + bound.get_str() +
                         " for symbol " + s.key());
}

std::array<Int, 3> choose_reducing_vector(const ModularSymbol& s, ReduceStrategy strategy) {
    const Int d = s.det();
    const Int absdet = abs(d);
    std::array<std::array<Int, 3>, 3> cof = {cross(s.cols.col(1), s.cols.col(2)),
                                             cross(s.cols.col(2), s.cols.col(0)),
                                             cross(s.cols.col(0), s.cols.col(1))};

    if (strategy == ReduceStrategy::ExhaustiveSmall) return exhaustive_search(s, cof, absdet);

    bool use_floor = strategy == ReduceStrategy::FloorCentric;
    std::optional<Candidate> best;
    auto consider = [&](std::array<Int, 3> v) {
        make_primitive(v);
        std::array<Int, 3> subs;
        if (!admissible(v, cof, absdet, &subs)) return;
        Candidate c{v, 0, 0};
        for (const auto& x : subs) {
            c.worst = std::max(c.worst, Int(abs(x)));
            c.total += abs(x);
        }
        if (!best) {
            best = c;
            return;
        }
        const Int& lhs = use_floor ? c.total : c.worst;
        const Int& rhs = use_floor ? best->total : best->worst;
        if (lhs < rhs || (lhs == rhs && lex_less(c.v, best->v))) best = c;
    };

    const auto& ts = barycenters();
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const auto& t = ts[k];
        std::array<Int, 3> v;
        for (std::size_t i = 0; i < 3; ++i) {
            Rat x = s.cols(i, 0) * t[0] + s.cols(i, 1) * t[1] + s.cols(i, 2) * t[2];
            v[i] = use_floor ? floor_rat(x) : round_half_up(x);
        }
        consider(v);
        if (k < 2) {  // unit-box offsets around the two central roundings
            for (long a = -1; a <= 1; ++a)
                for (long b = -1; b <= 1; ++b)
                    for (long c = -1; c <= 1; ++c) {
                        if (!a && !b && !c) continue;
                        consider({v[0] + a, v[1] + b, v[2] + c});
                    }
        }
    }
    if (best) return best->v;
    return exhaustive_search(s, cof, absdet);
}

struct CacheKey {
    std::string mat;
    ReduceStrategy strategy;
    bool operator==(const CacheKey& o) const { return strategy == o.strategy && mat == o.mat; }
};

struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const {
        return std::hash<std::string>()(k.mat) * 31 + static_cast<std::size_t>(k.strategy);
    }
};

std::unordered_map<CacheKey, SymbolSum, CacheKeyHash> g_cache;
std::mutex g_cache_mutex;

void merge_into(SymbolSum& acc, const SymbolSum& add, const Int& mult) {
    for (const auto& [c, s] : add.terms) {
        bool found = false;
        for (auto& [ac, as] : acc.terms) {
            if (as == s) {
                ac += c * mult;
                found = true;
                break;
            }
        }
        if (!found) acc.terms.emplace_back(c * mult, s);
    }
}

void prune(SymbolSum& s) {
    std::erase_if(s.terms, [](const auto& t) { return t.first == 0; });
    std::sort(s.terms.begin(), s.terms.end(),
              [](const auto& a, const auto& b) { return a.second.key() < b.second.key(); });
}

SymbolSum reduce_impl(const ModularSymbol& s, ReduceStrategy strategy, std::ostream* trace,
                      ReduceStats* stats, std::size_t depth) {
    if (stats) {
        ++stats->nodes;
        stats->max_depth = std::max(stats->max_depth, depth);
    }
    const Int d = s.det();
    if (trace) {
        *trace << std::string(2 * depth, ' ') << "{\"det\":" << d.get_str() << ",\"symbol\":\""
               << s.key() << "\"}\n";
    }
    SymbolSum out;
    if (d == 0) return out;
    if (d == 1 || d == -1) {
        out.terms.emplace_back(1, s);
        return out;
    }

    if (!trace) {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_cache.find(CacheKey{s.key(), strategy});
        if (it != g_cache.end()) return it->second;
    }

    auto v = choose_reducing_vector(s, strategy);
    const Int absdet = abs(d);
    for (std::size_t j = 0; j < 3; ++j) {
        ModularSymbol branch = s.with_column(j, v);
        // strict determinant decrease is the termination measure
        if (branch.det() != 0 && abs(branch.det()) >= absdet)
            throw std::logic_error("reduction step failed to decrease the determinant");
        SymbolSum sub = reduce_impl(branch, strategy, trace, stats, depth + 1);
        merge_into(out, sub, 1);
    }
    prune(out);

    if (!trace) {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        g_cache.emplace(CacheKey{s.key(), strategy}, out);
    }
    return out;
}

}  // namespace

void clear_reduction_cache() {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_cache.clear();
}

SymbolSum reduce(const ModularSymbol& s, ReduceStrategy strategy, std::ostream* trace,
                 ReduceStats* stats) {
    return reduce_impl(s, strategy, trace, stats, 0);
}

namespace {

std::array<Int, 3> pairing_point(const ModularSymbol& s, PairingKind kind) {
    if (kind == PairingKind::FirstColumn) return s.cols.col(0);
    // first column of s^{-1} up to the determinant: the cross product of the
    // last two rows
    std::array<Int, 3> r1{s.cols(1, 0), s.cols(1, 1), s.cols(1, 2)};
    std::array<Int, 3> r2{s.cols(2, 0), s.cols(2, 1), s.cols(2, 2)};
    return cross(r1, r2);
}

template <class Scalar>
Scalar pairing_impl(const std::vector<Scalar>& f, const ModularSymbol& s, const PointTable& table,
                    PairingKind kind) {
    Int d = s.det();
    if (d != 1 && d != -1)
        throw std::invalid_argument("pairing requires a unimodular symbol, det = " + d.get_str());
    auto pt = pairing_point(s, kind);
    std::size_t idx = table.index_of(normalize(pt[0], pt[1], pt[2], table.level()));
    // no determinant sign here: swapping two columns moves the evaluation
    // point by a signed permutation, and the model relations already carry
    // the sign (swap-and-negate gives the same value on model vectors)
    return f[idx];
}

template <class Scalar>
Scalar pair_rational_impl(const std::vector<Scalar>& f, const ModularSymbol& s,
                          const PointTable& table, ReduceStrategy strategy, PairingKind kind) {
    SymbolSum sum = reduce(s, strategy);
    Scalar acc(0);
    for (const auto& [c, term] : sum.terms) {
        Scalar val = pairing_impl(f, term, table, kind);
        if (c == 1)
            acc += val;
        else if (c == -1)
            acc -= val;
        else
            acc += Scalar(Rat(c)) * val;
    }
    return acc;
}

}  // namespace

GaussRat pairing(const std::vector<GaussRat>& f, const ModularSymbol& s, const PointTable& table,
                 PairingKind kind) {
    return pairing_impl(f, s, table, kind);
}

Rat pairing(const std::vector<Rat>& f, const ModularSymbol& s, const PointTable& table,
            PairingKind kind) {
    return pairing_impl(f, s, table, kind);
}

GaussRat pair_rational(const std::vector<GaussRat>& f, const ModularSymbol& s,
                       const PointTable& table, ReduceStrategy strategy, PairingKind kind) {
    return pair_rational_impl(f, s, table, strategy, kind);
}

Rat pair_rational(const std::vector<Rat>& f, const ModularSymbol& s, const PointTable& table,
                  ReduceStrategy strategy, PairingKind kind) {
    return pair_rational_impl(f, s, table, strategy, kind);
}

std::vector<std::pair<std::size_t, Int>> reduce_functional(const ModularSymbol& s,
                                                           const PointTable& table,
                                                           ReduceStrategy strategy,
                                                           PairingKind kind) {
    SymbolSum sum = reduce(s, strategy);
    std::map<std::size_t, Int> acc;
    for (const auto& [c, term] : sum.terms) {
        auto pt = pairing_point(term, kind);
        std::size_t idx = table.index_of(normalize(pt[0], pt[1], pt[2], table.level()));
        acc[idx] += c;
    }
    std::vector<std::pair<std::size_t, Int>> out;
    for (auto& [i, c] : acc)
        if (c != 0) out.emplace_back(i, c);
    return out;
}

}  // namespace hecke3
