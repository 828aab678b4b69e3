#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "worked_examples.hpp"
#include "pcmlead/matrix_io.hpp"
#include "pcmlead/pcm.hpp"

using namespace pcmlead;

namespace {

MultiplicativePcm random_reciprocal(int n, std::mt19937_64& gen) {
  return to_multiplicative(AdditivePcm(oracle::random_skew(n, gen, std::log(9.0))));
}

}  // namespace

TEST_CASE("additive construction symmetrizes and rejects non-skew input") {
  Matrix x = fixtures::greedy_input().entries();
  x(0, 1) += 1e-14;
  AdditivePcm a(x);
  CHECK(a(0, 1) == -a(1, 0));
  CHECK(a(2, 2) == 0.0);

  x(0, 1) += 1e-6;
  CHECK_THROWS_AS(AdditivePcm{x}, InvariantError);
  CHECK_THROWS_AS(AdditivePcm{Matrix::Zero(2, 2)}, DomainError);
  CHECK_THROWS_AS(AdditivePcm{Matrix::Zero(3, 4)}, DimensionError);
  Matrix nan = Matrix::Zero(3, 3);
  nan(0, 1) = NAN;
  nan(1, 0) = NAN;
  CHECK_THROWS(AdditivePcm{nan});
}

TEST_CASE("multiplicative construction checks positivity and reciprocity") {
  Matrix m = Matrix::Ones(3, 3);
  m(0, 1) = 2.0;
  m(1, 0) = 0.5;
  CHECK_NOTHROW(MultiplicativePcm{m});
  m(1, 0) = 0.6;
  CHECK_THROWS_AS(MultiplicativePcm{m}, InvariantError);
  m(0, 1) = -2.0;
  m(1, 0) = -0.5;
  CHECK_THROWS_AS(MultiplicativePcm{m}, InvariantError);
  Matrix d = Matrix::Ones(3, 3);
  d(1, 1) = 2.0;
  CHECK_THROWS_AS(MultiplicativePcm{d}, InvariantError);
}

TEST_CASE("size cap") {
  const int old = max_alternatives();
  set_max_alternatives(5);
  CHECK_THROWS_AS(AdditivePcm::zero(6), DomainError);
  CHECK_NOTHROW(AdditivePcm::zero(5));
  set_max_alternatives(old);
}

TEST_CASE("conversions round-trip") {
  std::mt19937_64 gen(7);
  for (int n = 3; n <= 9; ++n) {
    AdditivePcm a(oracle::random_skew(n, gen, 3.0));
    AdditivePcm back = to_additive(to_multiplicative(a));
    CHECK((back.entries() - a.entries()).cwiseAbs().maxCoeff() < 1e-12);

    MultiplicativePcm m = random_reciprocal(n, gen);
    MultiplicativePcm mb = to_multiplicative(to_additive(m));
    CHECK(((mb.entries() - m.entries()).array() / m.entries().array())
              .abs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("rankings agree under the log map") {
  std::mt19937_64 gen(11);
  for (int n = 3; n <= 9; ++n) {
    MultiplicativePcm m = random_reciprocal(n, gen);
    PriorityVector g = geometric_ranking(m);
    PriorityVector r = additive_ranking(to_additive(m));
    for (int i = 0; i < n; ++i) CHECK(std::log(g[i]) == doctest::Approx(r[i]).epsilon(1e-12));
  }
  PriorityVector w = additive_ranking(fixtures::greedy_input());
  CHECK(w[0] == doctest::Approx(3.0));
  CHECK(w[1] == doctest::Approx(2.0));
  CHECK(w[2] == doctest::Approx(1.0));
  CHECK(w[3] == doctest::Approx(-6.0));
}

TEST_CASE("frobenius metric properties") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 50; ++t) {
    AdditivePcm a(oracle::random_skew(5, gen, 2.0));
    AdditivePcm b(oracle::random_skew(5, gen, 2.0));
    AdditivePcm c(oracle::random_skew(5, gen, 2.0));
    CHECK(frobenius_inner(a, b) == doctest::Approx(frobenius_inner(b, a)));
    CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(frobenius_inner(a, a))));
    CHECK(frobenius_distance(a, a) == 0.0);
    CHECK(frobenius_distance(a, b) == doctest::Approx(frobenius_distance(b, a)));
    CHECK(frobenius_distance(a, c) <=
          frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-12);
  }
}

TEST_CASE("consistency index") {
  std::vector<double> v{1.0, 2.5, 0.3, 7.0, 4.0};
  CHECK(std::abs(consistency_index(consistent_from_weights(v))) < 1e-12);
  CHECK(perron_eigenvalue(MultiplicativePcm::ones(6)) == doctest::Approx(6.0).epsilon(1e-12));

  std::mt19937_64 gen(5);
  for (int t = 0; t < 100; ++t) {
    MultiplicativePcm m = random_reciprocal(3, gen);
    double lambda = oracle::perron_root_3x3(m.entries());
    CHECK(perron_eigenvalue(m) == doctest::Approx(lambda).epsilon(1e-10));
    CHECK(consistency_index(m) >= -1e-12);
  }
  for (int n = 4; n <= 9; ++n) {
    MultiplicativePcm m = random_reciprocal(n, gen);
    CHECK(perron_eigenvalue(m) ==
          doctest::Approx(oracle::perron_root(m.entries())).epsilon(1e-10));
  }
}

TEST_CASE("permutation conjugation") {
  Permutation p({2, 0, 3, 1});
  CHECK(p.inverse().compose(p) == Permutation::identity(4));
  CHECK(p.compose(p.inverse()) == Permutation::identity(4));
  CHECK_THROWS_AS(Permutation({0, 0, 1}), DomainError);

  AdditivePcm a = fixtures::greedy_input();
  AdditivePcm b = permute_conjugate(a, p);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) CHECK(b(k, l) == a(p(k), p(l)));
  Matrix pm = p.matrix();
  CHECK((pm * a.entries() * pm.transpose() - b.entries()).norm() == 0.0);
  CHECK(permute_conjugate(b, p.inverse()) == a);

  // rankings move with the alternatives; CI does not change
  PriorityVector wa = additive_ranking(a), wb = additive_ranking(b);
  for (int k = 0; k < 4; ++k) CHECK(wb[k] == doctest::Approx(wa[p(k)]));
  CHECK(consistency_index(to_multiplicative(b)) ==
        doctest::Approx(consistency_index(to_multiplicative(a))).epsilon(1e-12));
}

TEST_CASE("best alternative") {
  CHECK(best_alternative(PriorityVector(Vector{{1.0, 3.0, 3.0, 2.0}})) == 1);
  CHECK(best_alternative(PriorityVector(Vector{{1.0, 3.0, 3.0 + 1e-12}}), 1e-9) == 1);
  CHECK(best_alternative(PriorityVector(Vector{{1.0, 3.0, 3.0 + 1e-12}})) == 2);
  // adding a constant to every weight does not change the answer
  Vector w{{0.2, -1.0, 0.7, 0.69}};
  CHECK(best_alternative(PriorityVector(w)) ==
        best_alternative(PriorityVector(Vector(w.array() + 5.0))));
}

TEST_CASE("matrix csv round-trip") {
  std::mt19937_64 gen(9);
  Matrix x = oracle::random_skew(6, gen, 2.0);
  std::stringstream ss;
  write_matrix_csv(ss, MatrixKind::additive, x);
  MatrixFile f = parse_matrix_csv(ss);
  CHECK(f.kind == MatrixKind::additive);
  CHECK(f.entries == x);

  std::istringstream mul("# kind=multiplicative, n=3\n1,2,4\n0.5,1,2\n0.25,0.5,1\n");
  MatrixFile g = parse_matrix_csv(mul);
  AdditivePcm a = load_additive(g);
  CHECK(a(0, 2) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("matrix csv errors") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_matrix_csv(in);
  };
  CHECK_THROWS_AS(parse("0,1\n-1,0\n"), ParseError);
  CHECK_THROWS_AS(parse("# kind=other, n=3\n0,0,0\n0,0,0\n0,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse("# kind=additive, n=3\n0,1,x\n-1,0,0\n0,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse("# kind=additive, n=3\n0,1\n-1,0,0\n0,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse("# kind=additive, n=3\n0,1,0\n-1,0,0\n"), ParseError);
  CHECK_THROWS_AS(load_additive(parse("# kind=additive, n=3\n0,1,0\n1,0,0\n0,0,0\n")),
                  InvariantError);
}
