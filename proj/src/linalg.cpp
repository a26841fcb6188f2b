#include "hecke3/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hecke3 {

// ---------------------------------------------------------------------------
// SparseMat

SparseMat SparseMat::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> raw) {
    std::sort(raw.begin(), raw.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMat m;
    m.rows = rows;
    m.cols = cols;
    for (auto& t : raw) {
        if (t.row >= rows || t.col >= cols) throw std::out_of_range("triplet out of range");
        if (!m.entries.empty() && m.entries.back().row == t.row &&
            m.entries.back().col == t.col) {
            m.entries.back().value += t.value;
        } else {
            m.entries.push_back(std::move(t));
        }
    }
    std::erase_if(m.entries, [](const Triplet& t) { return t.value.is_zero(); });
    return m;
}

bool SparseMat::all_real() const {
    for (const auto& t : entries)
        if (t.value.im != 0) return false;
    return true;
}

std::vector<GaussRat> SparseMat::apply(const std::vector<GaussRat>& v) const {
    if (v.size() != cols) throw std::invalid_argument("apply: size mismatch");
    std::vector<GaussRat> out(rows, GaussRat(0));
    for (const auto& t : entries) out[t.row] += t.value * v[t.col];
    return out;
}

std::vector<Rat> SparseMat::apply(const std::vector<Rat>& v) const {
    if (v.size() != cols) throw std::invalid_argument("apply: size mismatch");
    std::vector<Rat> out(rows, Rat(0));
    for (const auto& t : entries) {
        if (t.value.im != 0) throw std::invalid_argument("apply: complex entry, real vector");
        out[t.row] += t.value.re * v[t.col];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dense RREF over an exact field

namespace {

template <class T>
std::vector<std::size_t> rref_impl(std::vector<std::vector<T>>& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t nrows = m.size(), ncols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < nrows; ++c) {
        std::size_t sel = r;
        while (sel < nrows && m[sel][c] == T(0)) ++sel;
        if (sel == nrows) continue;
        std::swap(m[sel], m[r]);
        T inv = T(1) / m[r][c];
        for (std::size_t j = c; j < ncols; ++j) m[r][j] = m[r][j] * inv;
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == r || m[i][c] == T(0)) continue;
            T f = m[i][c];
            for (std::size_t j = c; j < ncols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r, std::vector<T>(ncols, T(0)));
    return pivots;
}

template <class T>
std::vector<std::vector<T>> kernel_dense_impl(const std::vector<std::vector<T>>& m,
                                              std::size_t cols) {
    auto work = m;
    for (auto& row : work)
        if (row.size() != cols) throw std::invalid_argument("kernel_dense: ragged matrix");
    auto pivots = rref_impl(work);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(cols, T(0));
        v[f] = T(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = T(0) - work[i][f];
        basis.push_back(std::move(v));
    }
    rref_impl(basis);  // canonical form of the kernel itself
    return basis;
}

}  // namespace

std::vector<std::size_t> rref_rows(DenseG& m) { return rref_impl(m); }
std::vector<std::size_t> rref_rows(DenseQ& m) { return rref_impl(m); }
DenseG kernel_dense(const DenseG& m, std::size_t cols) { return kernel_dense_impl(m, cols); }
DenseQ kernel_dense(const DenseQ& m, std::size_t cols) { return kernel_dense_impl(m, cols); }

DenseG to_gauss(const DenseQ& m) {
    DenseG out;
    out.reserve(m.size());
    for (const auto& row : m) {
        std::vector<GaussRat> r;
        r.reserve(row.size());
        for (const auto& x : row) r.emplace_back(x);
        out.push_back(std::move(r));
    }
    return out;
}

GaussRat dot(const std::vector<GaussRat>& a, const std::vector<GaussRat>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    GaussRat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// ---------------------------------------------------------------------------
// mod-p arithmetic (p < 2^31 so products fit in uint64)

namespace {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 p) { return a * b % p; }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a % p, p - 2, p); }

u64 mod_of_int(const Int& x, u64 p) {
    Int r;
    Int pp(static_cast<unsigned long>(p));
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t());
    return r.get_ui();
}

// deterministic descending sequence of 31-bit primes
std::vector<u64> prime_list(std::size_t count) {
    std::vector<u64> out;
    Int p(Int(1) << 31);
    while (out.size() < count) {
        p -= 1;
        if (mpz_probab_prime_p(p.get_mpz_t(), 40)) out.push_back(p.get_ui());
    }
    return out;
}

struct IntRow {
    std::vector<std::pair<std::uint32_t, Int>> terms;  // sorted by column
};

// gcd-normalize and make the leading coefficient positive
void canonicalize_row(IntRow& row) {
    if (row.terms.empty()) return;
    Int g = 0;
    for (auto& [c, a] : row.terms) g = gcd(g, a);
    if (g != 0 && g != 1)
        for (auto& [c, a] : row.terms) a /= g;
    if (row.terms.front().second < 0)
        for (auto& [c, a] : row.terms) a = -a;
}

std::string row_key(const IntRow& row) {
    std::string k;
    for (const auto& [c, a] : row.terms) {
        k += std::to_string(c);
        k.push_back(':');
        k += a.get_str();
        k.push_back(';');
    }
    return k;
}

// Forward + backward elimination of integer rows mod p.
// Returns (pivot columns ascending, RREF rows aligned with pivots).
struct ModRref {
    std::vector<std::uint32_t> pivots;
    std::vector<std::vector<u64>> rows;  // dense, length ncols
};

ModRref modp_rref(const std::vector<IntRow>& rows, std::size_t ncols, u64 p) {
    ModRref out;
    std::vector<std::int32_t> pivot_of_col(ncols, -1);
    std::vector<u64> work(ncols);
    for (const auto& row : rows) {
        std::fill(work.begin(), work.end(), 0);
        bool any = false;
        for (const auto& [c, a] : row.terms) {
            u64 v = mod_of_int(a, p);
            work[c] = v;
            any = any || v != 0;
        }
        if (!any) continue;
        for (std::size_t c = 0; c < ncols; ++c) {
            if (work[c] == 0) continue;
            std::int32_t pr = pivot_of_col[c];
            if (pr >= 0) {
                const auto& prow = out.rows[pr];
                u64 f = p - work[c];
                for (std::size_t j = c; j < ncols; ++j)
                    if (prow[j]) work[j] = (work[j] + f * prow[j]) % p;
                continue;
            }
            // new pivot
            u64 inv = invmod(work[c], p);
            for (std::size_t j = c; j < ncols; ++j)
                if (work[j]) work[j] = mulmod(work[j], inv, p);
            pivot_of_col[c] = static_cast<std::int32_t>(out.rows.size());
            out.pivots.push_back(static_cast<std::uint32_t>(c));
            out.rows.push_back(work);
            break;
        }
    }
    // sort pivot rows ascending and back-eliminate
    std::vector<std::size_t> order(out.pivots.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.pivots[a] < out.pivots[b]; });
    ModRref sorted;
    for (auto i : order) {
        sorted.pivots.push_back(out.pivots[i]);
        sorted.rows.push_back(std::move(out.rows[i]));
    }
    for (std::size_t k = sorted.rows.size(); k-- > 0;) {
        const auto& prow = sorted.rows[k];
        u64 c = sorted.pivots[k];
        for (std::size_t i = 0; i < k; ++i) {
            u64 f = sorted.rows[i][c];
            if (!f) continue;
            u64 nf = p - f;
            for (std::size_t j = c; j < ncols; ++j)
                if (prow[j]) sorted.rows[i][j] = (sorted.rows[i][j] + nf * prow[j]) % p;
        }
    }
    return sorted;
}

// kernel basis mod p from an RREF, canonicalized (rows in RREF form)
std::vector<std::vector<u64>> modp_kernel_from_rref(const ModRref& r, std::size_t ncols,
                                                    u64 p) {
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : r.pivots) is_pivot[c] = true;
    std::vector<std::vector<u64>> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<u64> v(ncols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) {
            u64 x = r.rows[i][f];
            if (x) v[r.pivots[i]] = p - x;
        }
        basis.push_back(std::move(v));
    }
    // canonical RREF of the kernel stack
    std::size_t nrows = basis.size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < ncols && row < nrows; ++c) {
        std::size_t sel = row;
        while (sel < nrows && basis[sel][c] == 0) ++sel;
        if (sel == nrows) continue;
        std::swap(basis[sel], basis[row]);
        u64 inv = invmod(basis[row][c], p);
        for (std::size_t j = 0; j < ncols; ++j)
            if (basis[row][j]) basis[row][j] = mulmod(basis[row][j], inv, p);
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == row || basis[i][c] == 0) continue;
            u64 f = p - basis[i][c];
            for (std::size_t j = 0; j < ncols; ++j)
                if (basis[row][j]) basis[i][j] = (basis[i][j] + f * basis[row][j]) % p;
        }
        ++row;
    }
    return basis;
}

}  // namespace

std::optional<Rat> rational_reconstruct(const Int& x, const Int& m) {
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(m / 2).get_mpz_t());
    Int r0 = m, r1 = ((x % m) + m) % m;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    Int num = r1, den = t1;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den > bound || gcd(num, den) != 1) return std::nullopt;
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------------------
// Sparse kernel: structured substitution sweeps + residual elimination

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    std::vector<Rat> ratio;  // val(i) = ratio[i] * val(parent(i)); 1 on roots
    std::vector<bool> zero;  // valid on roots

    explicit UnionFind(std::size_t n) : parent(n), ratio(n, Rat(1)), zero(n, false) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::pair<std::size_t, Rat> find(std::size_t i) {
        std::vector<std::size_t> path;
        std::size_t root = i;
        while (parent[root] != root) {
            path.push_back(root);
            root = parent[root];
        }
        // compress: ratio_to_root(node) = ratio[node] * ratio_to_root(parent)
        Rat acc(1);
        for (std::size_t k = path.size(); k-- > 0;) {
            acc = ratio[path[k]] * acc;
            parent[path[k]] = root;
            ratio[path[k]] = acc;
        }
        if (i == root) return {root, Rat(1)};
        return {root, ratio[i]};
    }
};

struct StructuredResult {
    // For each original column: either forced zero, or (live-class ordinal,
    // ratio to the class value).
    std::vector<std::int64_t> class_of;  // -1 for forced zero
    std::vector<Rat> ratio;
    std::vector<std::size_t> first_col_of_class;  // ascending
    std::vector<IntRow> residual;                 // over class ordinals, deduped, sorted
    std::size_t nlive = 0;
};

StructuredResult structured_eliminate(const std::vector<IntRow>& input, std::size_t ncols) {
    UnionFind uf(ncols);

    auto resolve = [&](const IntRow& row) {
        std::map<std::size_t, Rat> acc;
        for (const auto& [c, a] : row.terms) {
            auto [root, q] = uf.find(c);
            if (uf.zero[root]) continue;
            acc[root] += Rat(a) * q;
        }
        IntRow out;
        Int den_lcm = 1;
        for (auto& [c, v] : acc)
            if (v != 0) den_lcm = lcm(den_lcm, Int(v.get_den()));
        for (auto& [c, v] : acc) {
            if (v == 0) continue;
            Rat scaled = v * Rat(den_lcm);
            out.terms.emplace_back(static_cast<std::uint32_t>(c), Int(scaled.get_num()));
        }
        canonicalize_row(out);
        return out;
    };

    std::vector<const IntRow*> pool;
    pool.reserve(input.size());
    for (const auto& r : input) pool.push_back(&r);

    bool progress = true;
    std::vector<const IntRow*> residual_src;
    while (progress) {
        progress = false;
        residual_src.clear();
        for (const IntRow* rp : pool) {
            IntRow r = resolve(*rp);
            if (r.terms.empty()) continue;
            if (r.terms.size() == 1) {
                auto [root, q] = uf.find(r.terms[0].first);
                if (!uf.zero[root]) {
                    uf.zero[root] = true;
                    progress = true;
                }
            } else if (r.terms.size() == 2) {
                auto [ra, qa] = uf.find(r.terms[0].first);
                auto [rb, qb] = uf.find(r.terms[1].first);
                // A*val(a) + B*val(b) = 0 in resolved class coordinates
                Rat A(r.terms[0].second), B(r.terms[1].second);
                if (ra == rb) throw std::logic_error("resolver produced duplicate class");
                // val(ra) = (-B/A) val(rb)
                uf.parent[ra] = rb;
                uf.ratio[ra] = -B / A;
                progress = true;
            } else {
                residual_src.push_back(rp);
            }
        }
        pool = residual_src;
    }

    StructuredResult out;
    out.class_of.assign(ncols, -1);
    out.ratio.assign(ncols, Rat(0));
    std::unordered_map<std::size_t, std::size_t> class_index;
    for (std::size_t j = 0; j < ncols; ++j) {
        auto [root, q] = uf.find(j);
        if (uf.zero[root]) continue;
        auto it = class_index.find(root);
        std::size_t idx;
        if (it == class_index.end()) {
            idx = out.first_col_of_class.size();
            class_index.emplace(root, idx);
            out.first_col_of_class.push_back(j);
        } else {
            idx = it->second;
        }
        out.class_of[j] = static_cast<std::int64_t>(idx);
        out.ratio[j] = q;
    }
    out.nlive = out.first_col_of_class.size();

    // Re-express surviving rows over class ordinals, dedupe, order.
    std::unordered_set<std::string> seen;
    for (const IntRow* rp : pool) {
        IntRow r = resolve(*rp);
        if (r.terms.size() < 3) throw std::logic_error("sweep left a short row");
        IntRow mapped;
        for (auto& [c, a] : r.terms) {
            auto [root, q] = uf.find(c);
            (void)q;
            mapped.terms.emplace_back(
                static_cast<std::uint32_t>(class_index.at(root)), a);
        }
        std::sort(mapped.terms.begin(), mapped.terms.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        canonicalize_row(mapped);
        auto key = row_key(mapped);
        if (seen.insert(key).second) out.residual.push_back(std::move(mapped));
    }
    std::sort(out.residual.begin(), out.residual.end(),
              [](const IntRow& a, const IntRow& b) { return row_key(a) < row_key(b); });
    return out;
}

DenseQ residual_kernel_exact(const std::vector<IntRow>& rows, std::size_t ncols) {
    DenseQ dense;
    dense.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<Rat> v(ncols, Rat(0));
        for (const auto& [c, a] : r.terms) v[c] = Rat(a);
        dense.push_back(std::move(v));
    }
    return kernel_dense_impl(dense, ncols);
}

DenseQ residual_kernel_multimodular(const std::vector<IntRow>& rows, std::size_t ncols) {
    struct PrimeResult {
        u64 p;
        std::vector<std::uint32_t> pivots;                // of matrix RREF
        std::vector<std::vector<u64>> kernel;             // canonical mod-p kernel
    };
    auto primes = prime_list(40);
    std::size_t next_prime = 0;
    std::vector<PrimeResult> results;

    auto run_prime = [&]() {
        if (next_prime >= primes.size())
            throw std::runtime_error("multimodular kernel: prime budget exhausted");
        u64 p = primes[next_prime++];
        auto rr = modp_rref(rows, ncols, p);
        auto ker = modp_kernel_from_rref(rr, ncols, p);
        results.push_back({p, rr.pivots, std::move(ker)});
    };

    for (int i = 0; i < 3; ++i) run_prime();

    for (int attempt = 0; attempt < 12; ++attempt) {
        // group primes by matrix pivot set; the true rank is the max seen
        std::size_t best_rank = 0;
        for (auto& r : results) best_rank = std::max(best_rank, r.pivots.size());
        std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < results.size(); ++i)
            if (results[i].pivots.size() == best_rank) groups[results[i].pivots].push_back(i);
        std::size_t best_count = 0;
        const std::vector<std::size_t>* best_group = nullptr;
        for (auto& [piv, idxs] : groups)
            if (idxs.size() > best_count) {
                best_count = idxs.size();
                best_group = &idxs;
            }
        if (!best_group || best_count < 2) {
            run_prime();
            continue;
        }

        const auto& g = *best_group;
        std::size_t d = results[g[0]].kernel.size();
        bool shape_ok = true;
        for (auto i : g) shape_ok = shape_ok && results[i].kernel.size() == d;
        if (!shape_ok) {
            run_prime();
            continue;
        }

        // CRT entries and reconstruct
        Int modulus = 1;
        for (auto i : g) modulus *= Int(static_cast<unsigned long>(results[i].p));
        DenseQ basis(d, std::vector<Rat>(ncols, Rat(0)));
        bool ok = true;
        for (std::size_t r = 0; ok && r < d; ++r) {
            for (std::size_t c = 0; ok && c < ncols; ++c) {
                Int x = 0, m = 1;
                for (auto i : g) {
                    Int p(static_cast<unsigned long>(results[i].p));
                    Int v(static_cast<unsigned long>(results[i].kernel[r][c]));
                    // combine x mod m with v mod p
                    Int minv;
                    if (mpz_invert(minv.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()) == 0)
                        throw std::logic_error("CRT moduli not coprime");
                    Int t = ((v - x) * minv) % p;
                    if (t < 0) t += p;
                    x += m * t;
                    m *= p;
                }
                auto rec = rational_reconstruct(x, modulus);
                if (!rec) {
                    ok = false;
                    break;
                }
                basis[r][c] = *rec;
            }
        }
        if (ok) {
            // exact verification against the residual rows
            for (const auto& row : rows) {
                for (const auto& vec : basis) {
                    Rat s(0);
                    for (const auto& [c, a] : row.terms) s += Rat(a) * vec[c];
                    if (s != 0) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
        }
        if (ok) return basis;
        run_prime();
    }
    throw std::runtime_error("multimodular kernel failed to stabilize");
}

}  // namespace

DenseG kernel(const SparseMat& m, const KernelOptions& opts) {
    // complex entries: fall back to dense exact elimination
    if (!m.all_real()) {
        DenseG dense(m.rows, std::vector<GaussRat>(m.cols, GaussRat(0)));
        for (const auto& t : m.entries) dense[t.row][t.col] += t.value;
        return kernel_dense_impl(dense, m.cols);
    }

    // gather rows, clearing denominators per row
    std::vector<IntRow> rows(m.rows);
    {
        std::vector<std::vector<std::pair<std::uint32_t, Rat>>> qrows(m.rows);
        for (const auto& t : m.entries) {
            std::size_t col = opts.column_perm ? (*opts.column_perm)[t.col] : t.col;
            qrows[t.row].emplace_back(static_cast<std::uint32_t>(col), t.value.re);
        }
        for (std::size_t i = 0; i < m.rows; ++i) {
            auto& qr = qrows[i];
            std::sort(qr.begin(), qr.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            Int den = 1;
            for (const auto& [c, v] : qr) den = lcm(den, Int(v.get_den()));
            for (const auto& [c, v] : qr) {
                Rat s = v * Rat(den);
                rows[i].terms.emplace_back(c, Int(s.get_num()));
            }
            canonicalize_row(rows[i]);
        }
    }

    auto st = structured_eliminate(rows, m.cols);

    DenseQ kred;
    if (st.nlive == 0) {
        kred = {};
    } else if (st.residual.empty()) {
        kred.assign(st.nlive, std::vector<Rat>(st.nlive, Rat(0)));
        for (std::size_t i = 0; i < st.nlive; ++i) kred[i][i] = 1;
    } else if (st.nlive <= opts.exact_width_limit && !opts.force_multimodular) {
        kred = residual_kernel_exact(st.residual, st.nlive);
    } else {
        kred = residual_kernel_multimodular(st.residual, st.nlive);
        // certify the dimension: rank over Q >= rank mod p, so nullity over Q
        // <= the multimodular nullity; the expansion below verifies exactness,
        // which gives the matching lower bound.
    }

    // locate reduced pivots and their first-occurrence normalization ratios
    std::size_t d = kred.size();
    std::vector<std::size_t> red_pivot(d);
    for (std::size_t r = 0; r < d; ++r) {
        std::size_t c = 0;
        while (c < st.nlive && kred[r][c] == 0) ++c;
        if (c == st.nlive) throw std::logic_error("kernel: zero basis row");
        red_pivot[r] = c;
    }

    DenseG full(d, std::vector<GaussRat>(m.cols, GaussRat(0)));
    for (std::size_t r = 0; r < d; ++r) {
        Rat pivot_ratio = st.ratio[st.first_col_of_class[red_pivot[r]]];
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (st.class_of[j] < 0) continue;
            const Rat& kv = kred[r][static_cast<std::size_t>(st.class_of[j])];
            if (kv == 0) continue;
            full[r][j] = GaussRat(st.ratio[j] * kv / pivot_ratio);
        }
    }

    if (opts.column_perm) {
        // results are in permuted coordinates; map back
        DenseG unperm(d, std::vector<GaussRat>(m.cols, GaussRat(0)));
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t j = 0; j < m.cols; ++j)
                unperm[r][j] = full[r][(*opts.column_perm)[j]];
        full = std::move(unperm);
        rref_rows(full);
    }

    // exact verification against the original matrix
    for (const auto& vec : full) {
        auto img = m.apply(vec);
        for (const auto& x : img)
            if (!x.is_zero()) throw std::logic_error("kernel verification failed");
    }
    return full;
}

std::size_t nullity_mod_p(const SparseMat& m, std::uint64_t p) {
    using Term = std::pair<std::uint32_t, u64>;
    std::vector<std::vector<Term>> rows(m.rows);
    for (const auto& t : m.entries) {
        if (t.value.im != 0) throw std::invalid_argument("nullity_mod_p: complex entry");
        Rat v = t.value.re;
        u64 num = mod_of_int(Int(v.get_num()), p);
        u64 den = mod_of_int(Int(v.get_den()), p);
        if (den == 0) throw std::invalid_argument("nullity_mod_p: denominator divisible by p");
        u64 x = mulmod(num, invmod(den, p), p);
        if (x) rows[t.row].emplace_back(t.col, x);
    }
    for (auto& r : rows)
        std::sort(r.begin(), r.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });

    // normalize + dedupe, shortest rows first
    auto normalize_row = [&](std::vector<Term>& r) {
        if (r.empty()) return;
        u64 inv = invmod(r.front().second, p);
        for (auto& [c, v] : r) v = mulmod(v, inv, p);
    };
    for (auto& r : rows) normalize_row(r);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    // sparse forward elimination; pivot rows kept in reduced-leading form
    std::unordered_map<std::uint32_t, std::vector<Term>> pivot_rows;
    std::size_t rank = 0;
    std::vector<Term> tmp;
    for (auto& row : rows) {
        std::vector<Term> cur = std::move(row);
        while (!cur.empty()) {
            auto it = pivot_rows.find(cur.front().first);
            if (it == pivot_rows.end()) {
                normalize_row(cur);
                pivot_rows.emplace(cur.front().first, std::move(cur));
                ++rank;
                break;
            }
            const auto& prow = it->second;
            u64 f = p - cur.front().second;  // cur += f * prow, prow leading = 1
            tmp.clear();
            std::size_t i = 0, j = 0;
            while (i < cur.size() || j < prow.size()) {
                if (j == prow.size() || (i < cur.size() && cur[i].first < prow[j].first)) {
                    tmp.push_back(cur[i++]);
                } else if (i == cur.size() || prow[j].first < cur[i].first) {
                    tmp.emplace_back(prow[j].first, mulmod(f, prow[j].second, p));
                    ++j;
                } else {
                    u64 v = (cur[i].second + mulmod(f, prow[j].second, p)) % p;
                    if (v) tmp.emplace_back(cur[i].first, v);
                    ++i;
                    ++j;
                }
            }
            std::erase_if(tmp, [](const Term& t) { return t.second == 0; });
            cur = tmp;
        }
    }
    return m.cols - rank;
}

// ---------------------------------------------------------------------------
// eigenspace / charpoly

DenseG eigenspace(const DenseG& m, const GaussRat& lambda) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("eigenspace: matrix not square");
    DenseG shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= lambda;
    return kernel_dense_impl(shifted, n);
}

namespace {

// characteristic polynomial of an upper Hessenberg matrix mod p,
// coefficients ascending
std::vector<u64> hessenberg_charpoly_modp(std::vector<std::vector<u64>> h, std::size_t n,
                                          u64 p) {
    // reduce to Hessenberg form with pivoting
    for (std::size_t c = 0; c + 2 < n; ++c) {
        std::size_t sel = c + 1;
        while (sel < n && h[sel][c] == 0) ++sel;
        if (sel == n) continue;
        if (sel != c + 1) {
            std::swap(h[sel], h[c + 1]);
            for (std::size_t i = 0; i < n; ++i) std::swap(h[i][sel], h[i][c + 1]);
        }
        u64 inv = invmod(h[c + 1][c], p);
        for (std::size_t r = c + 2; r < n; ++r) {
            if (h[r][c] == 0) continue;
            u64 f = mulmod(h[r][c], inv, p);
            u64 nf = p - f;
            for (std::size_t j = c; j < n; ++j) h[r][j] = (h[r][j] + nf * h[c + 1][j]) % p;
            // column operation keeps similarity
            for (std::size_t i = 0; i < n; ++i) h[i][c + 1] = (h[i][c + 1] + f * h[i][r]) % p;
        }
    }
    // p_k(x) recurrence
    std::vector<std::vector<u64>> poly(n + 1);
    poly[0] = {1};
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<u64> cur(k + 1, 0);
        // (x - h_{kk}) * p_{k-1}
        const auto& prev = poly[k - 1];
        u64 hkk = h[k - 1][k - 1];
        for (std::size_t i = 0; i < prev.size(); ++i) {
            cur[i + 1] = (cur[i + 1] + prev[i]) % p;
            cur[i] = (cur[i] + mulmod(p - hkk, prev[i], p)) % p;
        }
        u64 sub = 1;  // product of subdiagonal entries h_{i,i-1}, i = m+1..k
        for (std::size_t m = k - 1; m >= 1; --m) {
            sub = mulmod(sub, h[m][m - 1], p);
            if (sub == 0) break;
            u64 f = mulmod(h[m - 1][k - 1], sub, p);
            if (f == 0) continue;
            u64 nf = p - f;
            const auto& pm = poly[m - 1];
            for (std::size_t i = 0; i < pm.size(); ++i) cur[i] = (cur[i] + nf * pm[i]) % p;
        }
        poly[k] = std::move(cur);
    }
    return poly[n];
}

std::vector<GaussRat> charpoly_real_multimodular(const DenseG& m) {
    std::size_t n = m.size();
    Int den_lcm = 1;
    for (const auto& row : m)
        for (const auto& x : row) den_lcm = lcm(den_lcm, Int(x.re.get_den()));
    std::vector<std::vector<Int>> im(n, std::vector<Int>(n));
    Int maxabs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat s = m[i][j].re * Rat(den_lcm);
            im[i][j] = s.get_num();
            maxabs = std::max(maxabs, Int(abs(im[i][j])));
        }
    if (maxabs == 0) maxabs = 1;

    // |c_k| <= binom(n,k) * (sqrt(k) * B)^k  (Hadamard bound on sums of
    // principal minors); take the max over k
    Int bound = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        Int binom;
        mpz_bin_uiui(binom.get_mpz_t(), n, k);
        Int sq_k(static_cast<unsigned long>(std::ceil(std::sqrt(double(k)))));
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), Int(sq_k * maxabs).get_mpz_t(), k);
        bound = std::max(bound, Int(binom * pk));
    }
    bound *= 2;

    auto primes = prime_list(8 + 2 * static_cast<std::size_t>(mpz_sizeinbase(
                                        bound.get_mpz_t(), 2) / 30));
    std::vector<Int> coeff(n + 1, 0);
    Int modulus = 1;
    std::size_t used = 0;
    for (u64 p : primes) {
        std::vector<std::vector<u64>> hp(n, std::vector<u64>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) hp[i][j] = mod_of_int(im[i][j], p);
        auto cp = hessenberg_charpoly_modp(std::move(hp), n, p);
        Int pp(static_cast<unsigned long>(p));
        for (std::size_t k = 0; k <= n; ++k) {
            Int v(static_cast<unsigned long>(cp[k]));
            Int minv;
            if (mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pp.get_mpz_t()) == 0)
                throw std::logic_error("charpoly CRT moduli not coprime");
            Int t = ((v - coeff[k]) * minv) % pp;
            if (t < 0) t += pp;
            coeff[k] += modulus * t;
        }
        modulus *= pp;
        ++used;
        if (modulus > bound) break;
    }
    if (modulus <= bound) throw std::logic_error("charpoly: not enough primes");
    for (auto& c : coeff)
        if (c > modulus / 2) c -= modulus;

    // consistency check with one fresh prime
    {
        u64 p = primes[used];
        std::vector<std::vector<u64>> hp(n, std::vector<u64>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) hp[i][j] = mod_of_int(im[i][j], p);
        auto cp = hessenberg_charpoly_modp(std::move(hp), n, p);
        for (std::size_t k = 0; k <= n; ++k)
            if (mod_of_int(coeff[k], p) != cp[k])
                throw std::logic_error("charpoly verification prime mismatch");
    }

    // undo scaling: coefficients of det(xI - M) are c'_k / d^{n-k}
    std::vector<GaussRat> out(n + 1);
    Int dp = 1;
    for (std::size_t k = 0; k <= n; ++k) {
        Rat q(coeff[n - k], dp);
        q.canonicalize();
        out[n - k] = GaussRat(q);
        dp *= den_lcm;
    }
    return out;
}

std::vector<GaussRat> charpoly_faddeev(const DenseG& a) {
    std::size_t n = a.size();
    std::vector<GaussRat> c(n + 1, GaussRat(0));
    c[n] = GaussRat(1);
    DenseG m(n, std::vector<GaussRat>(n, GaussRat(0)));  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A (M_{k-1} + c_{n-k+1} I)
        for (std::size_t i = 0; i < n; ++i) m[i][i] += c[n - k + 1];
        DenseG next(n, std::vector<GaussRat>(n, GaussRat(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (a[i][l].is_zero()) continue;
                for (std::size_t j = 0; j < n; ++j) next[i][j] += a[i][l] * m[l][j];
            }
        m = std::move(next);
        GaussRat tr(0);
        for (std::size_t i = 0; i < n; ++i) tr += m[i][i];
        c[n - k] = -(tr / GaussRat(Rat(static_cast<long>(k))));
    }
    return c;
}

}  // namespace

std::vector<GaussRat> charpoly(const DenseG& m) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("charpoly: matrix not square");
    if (n == 0) return {GaussRat(1)};
    bool real = true;
    for (const auto& row : m)
        for (const auto& x : row) real = real && x.im == 0;
    if (real && n >= 8) return charpoly_real_multimodular(m);
    return charpoly_faddeev(m);
}

std::vector<GaussRat> gaussian_integer_eigenvalues(const DenseG& m, long max_radius) {
    auto cp = charpoly(m);
    std::size_t n = cp.size() - 1;
    // Cauchy bound: every root has |z| <= 1 + max |c_k| (monic).  The search
    // radius is capped; eigenvalues of interest here are of small height.
    Rat maxc(0);
    for (std::size_t k = 0; k < n; ++k) {
        Rat a = abs(cp[k].re) + abs(cp[k].im);
        if (a > maxc) maxc = a;
    }
    Int cauchy = Int(maxc.get_num() / maxc.get_den()) + 2;
    long bound = (cauchy < max_radius) ? static_cast<long>(cauchy.get_si()) : max_radius;

    // fast filter in F_p[t]/(t^2+1)
    const u64 p = 2147483647ull;
    std::vector<std::pair<u64, u64>> cpmod(cp.size());
    bool filter_ok = true;
    for (std::size_t k = 0; k < cp.size(); ++k) {
        u64 dr = mod_of_int(Int(cp[k].re.get_den()), p);
        u64 di = mod_of_int(Int(cp[k].im.get_den()), p);
        if (dr == 0 || di == 0) {
            filter_ok = false;
            break;
        }
        cpmod[k] = {mulmod(mod_of_int(Int(cp[k].re.get_num()), p), invmod(dr, p), p),
                    mulmod(mod_of_int(Int(cp[k].im.get_num()), p), invmod(di, p), p)};
    }
    auto eval_mod = [&](u64 a, u64 b) {
        u64 re = 0, im = 0;
        for (std::size_t k = cp.size(); k-- > 0;) {
            u64 r2 = (mulmod(re, a, p) + p - mulmod(im, b, p) + cpmod[k].first) % p;
            u64 i2 = (mulmod(re, b, p) + mulmod(im, a, p) + cpmod[k].second) % p;
            re = r2;
            im = i2;
        }
        return re == 0 && im == 0;
    };
    auto eval = [&](const GaussRat& z) {
        GaussRat acc(0);
        for (std::size_t k = cp.size(); k-- > 0;) acc = acc * z + cp[k];
        return acc;
    };
    std::vector<GaussRat> roots;
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b) {
            if (Int(a) * a + Int(b) * b > Int(bound) * bound) continue;
            if (filter_ok && !eval_mod((p + a % (long long)p) % p, (p + b % (long long)p) % p))
                continue;
            GaussRat z(a, b);
            if (eval(z).is_zero()) roots.push_back(z);
        }
    return roots;
}

}  // namespace hecke3
