#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hecke3/rational.hpp"

namespace hecke3 {

struct Triplet {
    std::size_t row, col;
    GaussRat value;
};

// Sparse matrix over Q(i); stored entries are nonzero, sorted by (row, col),
// no duplicates.
struct SparseMat {
    std::size_t rows = 0, cols = 0;
    std::vector<Triplet> entries;

    static SparseMat from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> raw);
    bool all_real() const;
    // applies the matrix to a dense vector
    std::vector<GaussRat> apply(const std::vector<GaussRat>& v) const;
    std::vector<Rat> apply(const std::vector<Rat>& v) const;
};

using DenseQ = std::vector<std::vector<Rat>>;
using DenseG = std::vector<std::vector<GaussRat>>;

// Reduced row echelon form in place; returns pivot column indices (ascending).
std::vector<std::size_t> rref_rows(DenseG& m);
std::vector<std::size_t> rref_rows(DenseQ& m);

// Exact basis of the right null space in reduced echelon form with pivot
// columns ascending.  Row vectors of the returned matrix are kernel vectors.
DenseG kernel_dense(const DenseG& m, std::size_t cols);
DenseQ kernel_dense(const DenseQ& m, std::size_t cols);

struct KernelOptions {
    // Residual systems at most this wide are solved by exact elimination;
    // larger ones go through the multi-modular path with exact verification.
    std::size_t exact_width_limit = 400;
    bool force_multimodular = false;
    // Optional permutation of column indices: kernel is computed for the
    // matrix with columns relabeled through perm (used by ordering tests).
    const std::vector<std::size_t>* column_perm = nullptr;
};

// Kernel of a sparse matrix: structured substitution sweeps (unit rows force
// zeros, two-term rows merge variables) followed by exact or multi-modular
// elimination on the residual block.  The result is always verified exactly
// against the input matrix, and the dimension is certified by a mod-p rank
// bound on the residual system.
DenseG kernel(const SparseMat& m, const KernelOptions& opts = {});

// Exact basis of ker(m - lambda*I).
DenseG eigenspace(const DenseG& m, const GaussRat& lambda);

// Monic characteristic polynomial, coefficients ascending (c[0] + c[1] x + ...).
std::vector<GaussRat> charpoly(const DenseG& m);

// All Gaussian-integer eigenvalues (exact roots a+bi of the characteristic
// polynomial with a, b in Z), found by a bounded search: complete whenever the
// Cauchy root bound fits inside max_radius.
std::vector<GaussRat> gaussian_integer_eigenvalues(const DenseG& m, long max_radius = 100);

// mod-p nullity of the sparse matrix by a generic sparse elimination; used as
// an independent upper-bound certificate for kernel dimensions.
std::size_t nullity_mod_p(const SparseMat& m, std::uint64_t p);

// rational reconstruction: finds n/d with |n|,|d| <= sqrt(m/2), d*x = n mod m
std::optional<Rat> rational_reconstruct(const Int& x, const Int& m);

DenseG to_gauss(const DenseQ& m);
GaussRat dot(const std::vector<GaussRat>& a, const std::vector<GaussRat>& b);

}  // namespace hecke3
