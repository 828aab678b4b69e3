#pragma once

// Orthogonal projection of an additive PCM onto the tie space of two
// alternatives: the subspace of skew-symmetric matrices whose rows i and j
// have equal sums, hence equal row-mean weights.
//
// The projection onto the tie space of alternatives 0 and 1 is computed from
// an explicit integer basis of that space, orthogonalized once per n with
// classical Gram-Schmidt. Other pairs are handled by relabelling the pair to
// slots {0, 1}, projecting, and relabelling back.

#include <memory>
#include <vector>

#include "pcmlead/pcm.hpp"

namespace pcmlead {

/// Integer-valued basis of the 0/1 tie space, in the fixed order
///   C^{qr} for 2 <= q < r <= n-1 (lexicographic),
///   E,
///   F^p for p = 2..n-1,
///   G^p for p = 2..n-2.
/// It has (n^2 - n - 2) / 2 members.
struct TieBasis {
  int n = 0;
  std::vector<AdditivePcm> vectors;
};

/// Pairwise Frobenius-orthogonal (not normalized) basis of the same space.
struct OrthogonalTieBasis {
  int n = 0;
  std::vector<AdditivePcm> vectors;
  std::vector<double> squared_norms;
};

/// (n^2 - n - 2) / 2.
int tie_space_dimension(int n);

TieBasis build_tie_basis(int n);

/// H^k = B^k - sum_{p<k} <H^p, B^k> / <H^p, H^p> * H^p.
/// Throws InvariantError if some H^k has (numerically) zero norm.
OrthogonalTieBasis gram_schmidt(const TieBasis& basis);

/// Shared, lazily built orthogonal basis for n. Thread-safe; every caller for
/// the same n receives the same instance.
std::shared_ptr<const OrthogonalTieBasis> orthogonal_tie_basis(int n);

/// Sum_k (<A, H^k> / <H^k, H^k>) H^k.
AdditivePcm project_tie_12(const AdditivePcm& a,
                           const OrthogonalTieBasis& basis);

/// Same projection written as A - f(A)/n * R, where f(A) is the row-0 minus
/// row-1 sum difference and R its Frobenius representer:
///   r_01 = 1, r_0l = 1/2, r_1l = -1/2 (l >= 2), skew-symmetric.
/// Kept as an independent check on the basis route.
AdditivePcm closed_form_projection(const AdditivePcm& a);

/// The representer R above, with <R, R> = n and <A, R> = f(A).
AdditivePcm tie_representer(int n);

/// Sum_l a_il - Sum_l a_jl.
double row_sum_difference(const AdditivePcm& a, int i, int j);

/// Permutation that moves alternatives {i, j} into slots {0, 1}.
/// Requires 0 <= i < j < n.
///   (0, 1): identity
///   (0, j): swap 1 <-> j
///   (1, j): swap 0 <-> j          (j lands in slot 0, i stays in slot 1)
///   (i, j), i >= 2: swap 0 <-> i and 1 <-> j
/// Every case is an involution.
Permutation build_permutation(int i, int j, int n);

/// Nearest matrix (Frobenius) to `a` in which alternatives i and j tie.
/// Requires 0 <= i < j < n and basis.n == a.n().
AdditivePcm eq(const AdditivePcm& a, int i, int j,
               const OrthogonalTieBasis& basis);

/// eq() with the cached basis for a.n().
AdditivePcm eq(const AdditivePcm& a, int i, int j);

}  // namespace pcmlead
