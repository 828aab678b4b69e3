#include "pcmlead/tie_projection.hpp"

#include <map>
#include <mutex>
#include <string>

namespace pcmlead {

namespace {

constexpr double kDegenerateSquaredNorm = 1e-12;

void check_n(int n) {
  if (n < kMinAlternatives) {
    throw DomainError("tie space needs n >= " +
                      std::to_string(kMinAlternatives) + ", got " +
                      std::to_string(n));
  }
  if (n > max_alternatives()) {
    throw DomainError("n=" + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(max_alternatives()));
  }
}

void check_pair(int i, int j, int n) {
  if (!(0 <= i && i < j && j < n)) {
    throw DomainError("alternative pair (" + std::to_string(i) + "," +
                      std::to_string(j) + ") must satisfy 0 <= i < j < " +
                      std::to_string(n));
  }
}

// Sets m(k,l) = v and m(l,k) = -v.
void put(Matrix& m, int k, int l, double v) {
  m(k, l) = v;
  m(l, k) = -v;
}

}  // namespace

int tie_space_dimension(int n) { return (n * n - n - 2) / 2; }

TieBasis build_tie_basis(int n) {
  check_n(n);
  const int last = n - 1;
  TieBasis basis;
  basis.n = n;
  basis.vectors.reserve(static_cast<std::size_t>(tie_space_dimension(n)));

  for (int q = 2; q < n; ++q) {
    for (int r = q + 1; r < n; ++r) {
      Matrix c = Matrix::Zero(n, n);
      put(c, q, r, 1.0);
      basis.vectors.emplace_back(std::move(c));
    }
  }

  Matrix e = Matrix::Zero(n, n);
  put(e, 0, 1, 1.0);
  put(e, 1, last, 2.0);
  basis.vectors.emplace_back(std::move(e));

  for (int p = 2; p < n; ++p) {
    Matrix f = Matrix::Zero(n, n);
    put(f, 0, p, 1.0);
    put(f, 1, last, 1.0);
    basis.vectors.emplace_back(std::move(f));
  }

  for (int p = 2; p < last; ++p) {
    Matrix g = Matrix::Zero(n, n);
    put(g, 1, p, 1.0);
    put(g, last, 1, 1.0);
    basis.vectors.emplace_back(std::move(g));
  }
  return basis;
}

OrthogonalTieBasis gram_schmidt(const TieBasis& basis) {
  OrthogonalTieBasis out;
  out.n = basis.n;
  out.vectors.reserve(basis.vectors.size());
  out.squared_norms.reserve(basis.vectors.size());

  for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
    const Matrix& b = basis.vectors[k].entries();
    Matrix h = b;
    for (std::size_t p = 0; p < k; ++p) {
      const Matrix& hp = out.vectors[p].entries();
      h -= (hp.cwiseProduct(b).sum() / out.squared_norms[p]) * hp;
    }
    const double norm2 = h.squaredNorm();
    if (norm2 <= kDegenerateSquaredNorm) {
      throw InvariantError("Gram-Schmidt hit a zero vector at position " +
                           std::to_string(k + 1) +
                           "; the input family is linearly dependent");
    }
    out.vectors.push_back(skew_part(h));
    out.squared_norms.push_back(norm2);
  }
  return out;
}

std::shared_ptr<const OrthogonalTieBasis> orthogonal_tie_basis(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const OrthogonalTieBasis>> cache;

  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_shared<const OrthogonalTieBasis>(
        gram_schmidt(build_tie_basis(n)));
  }
  return slot;
}

AdditivePcm project_tie_12(const AdditivePcm& a,
                           const OrthogonalTieBasis& basis) {
  if (a.n() != basis.n) {
    throw DimensionError("matrix has n=" + std::to_string(a.n()) +
                         " but basis was built for n=" +
                         std::to_string(basis.n));
  }
  const Matrix& x = a.entries();
  Matrix sum = Matrix::Zero(a.n(), a.n());
  for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
    const Matrix& h = basis.vectors[k].entries();
    sum += (x.cwiseProduct(h).sum() / basis.squared_norms[k]) * h;
  }
  return skew_part(sum);
}

double row_sum_difference(const AdditivePcm& a, int i, int j) {
  return a.entries().row(i).sum() - a.entries().row(j).sum();
}

AdditivePcm tie_representer(int n) {
  check_n(n);
  Matrix r = Matrix::Zero(n, n);
  put(r, 0, 1, 1.0);
  for (int l = 2; l < n; ++l) {
    put(r, 0, l, 0.5);
    put(r, 1, l, -0.5);
  }
  return AdditivePcm(std::move(r));
}

AdditivePcm closed_form_projection(const AdditivePcm& a) {
  const int n = a.n();
  const double f = row_sum_difference(a, 0, 1);
  const Matrix r = tie_representer(n).entries();
  return skew_part(a.entries() - (f / n) * r);
}

Permutation build_permutation(int i, int j, int n) {
  check_n(n);
  check_pair(i, j, n);
  if (i == 0) {
    return j == 1 ? Permutation::identity(n)
                  : Permutation::transposition(n, 1, j);
  }
  if (i == 1) return Permutation::transposition(n, 0, j);
  return Permutation::transposition(n, 0, i)
      .compose(Permutation::transposition(n, 1, j));
}

AdditivePcm eq(const AdditivePcm& a, int i, int j,
               const OrthogonalTieBasis& basis) {
  check_pair(i, j, a.n());
  if (basis.n != a.n()) {
    throw DimensionError("basis built for n=" + std::to_string(basis.n) +
                         " used on a matrix with n=" + std::to_string(a.n()));
  }
  if (i == 0 && j == 1) return project_tie_12(a, basis);
  const Permutation p = build_permutation(i, j, a.n());
  const AdditivePcm moved = permute_conjugate(a, p);
  return permute_conjugate(project_tie_12(moved, basis), p.inverse());
}

AdditivePcm eq(const AdditivePcm& a, int i, int j) {
  return eq(a, i, j, *orthogonal_tie_basis(a.n()));
}

}  // namespace pcmlead
