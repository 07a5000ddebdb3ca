#pragma once

#include "supersle/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace supersle {

using Vec = std::vector<Rational>;
using Matrix = std::vector<Vec>;

/// In-place reduced row echelon form; returns the pivot column of each
/// surviving nonzero row (zero rows are dropped).
std::vector<std::size_t> rref(Matrix& m);

std::size_t rank(Matrix m);

/// Basis of { x : A x = 0 }, with A given as rows of length cols.
std::vector<Vec> nullspace(const Matrix& a, std::size_t cols);

/// Exact solution of A x = b (A rows x cols); nullopt if inconsistent.
/// Free variables are set to zero.
std::optional<Vec> solve(Matrix a, Vec b);

/// Whether v lies in the row span of basis.
bool in_span(const std::vector<Vec>& basis, const Vec& v);

/// Canonical representative of v modulo the row span of basis
/// (eliminates every pivot coordinate of the span's RREF).
Vec reduce_mod_span(const std::vector<Vec>& basis, Vec v);

/// Matrix P (dim x dim) with P v = reduce_mod_span(basis, v) for all v.
Matrix quotient_projector(const std::vector<Vec>& basis, std::size_t dim);

}  // namespace supersle
