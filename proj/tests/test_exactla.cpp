#include <doctest.h>

#include <random>

#include "corner/linalg.hpp"

using namespace corner;
using Q = Rational;
using MQ = Matrix<Q>;

namespace {

MQ random_matrix(std::mt19937& gen, int r, int c, int span = 7) {
  MQ m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = Q(static_cast<long>(gen() % static_cast<unsigned>(span)) - span / 2);
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("exactla");

TEST_CASE("rational canonical form") {
  Q a(6, 8);
  CHECK(a.num_str() == "3");
  CHECK(a.den_str() == "4");
  Q b(3, -4);
  CHECK(b.str() == "-3/4");
  CHECK(Q::parse("10/15").str() == "2/3");
  CHECK(Q::parse("-7").str() == "-7");
  CHECK((Q(1, 3) + Q(1, 6)).str() == "1/2");
  CHECK_THROWS_AS(Q::parse("zebra"), Error);
  CHECK_THROWS_AS(Q(1, 0), Error);
  CHECK_THROWS_AS(Q(1) / Q(0), Error);
}

TEST_CASE("prime field arithmetic") {
  Fp::set_modulus(7);
  CHECK(Fp(10).str() == "3");
  CHECK((Fp(3) * Fp(5)).str() == "1");
  CHECK((Fp(1) / Fp(3)).str() == "5");
  CHECK(Fp::parse("1/2").str() == "4");
  CHECK((-Fp(2)).str() == "5");
  CHECK_THROWS_AS(Fp::set_modulus(6), Error);
  Fp::set_modulus(10007);
  CHECK((Fp(10006) + Fp(2)).str() == "1");
}

TEST_CASE("rref on the stated examples") {
  // identity stays put
  auto r1 = rref(MQ::identity(2));
  CHECK(r1.mat == MQ::identity(2));
  CHECK(r1.pivots == std::vector<int>{0, 1});
  // rank one collapse
  auto r2 = rref(MQ::from_rows({{1, 2}, {2, 4}}));
  CHECK(r2.mat == MQ::from_rows({{1, 2}, {0, 0}}));
  CHECK(r2.pivots == std::vector<int>{0});
  // permutation sorts to the identity
  auto r3 = rref(MQ::from_rows({{0, 1}, {1, 0}}));
  CHECK(r3.mat == MQ::identity(2));
  CHECK(r3.pivots == std::vector<int>{0, 1});
}

TEST_CASE("rref is idempotent and preserves row space") {
  std::mt19937 gen(11);
  for (int t = 0; t < 30; ++t) {
    MQ m = random_matrix(gen, 1 + static_cast<int>(gen() % 5), 1 + static_cast<int>(gen() % 5));
    auto r = rref(m);
    auto rr = rref(r.mat);
    CHECK(rr.mat == r.mat);
    CHECK(rr.pivots == r.pivots);
    // every original row reduces to zero against the rref basis
    Subspace<Q> s = subspace_from_rows(m);
    for (int i = 0; i < m.rows(); ++i) {
      Vector<Q> red = coset_reduce(m.row(i), s);
      for (const Q& x : red) CHECK(x.is_zero());
    }
  }
}

TEST_CASE("kernel basis examples") {
  CHECK(kernel_basis(MQ::identity(3)).empty());
  auto k0 = kernel_basis(MQ(2, 3));
  CHECK(k0.size() == 3);
  auto k1 = kernel_basis(MQ::from_rows({{1, 2}, {2, 4}}));
  REQUIRE(k1.size() == 1);
  // proportional to (2, -1): kernel vector is (-2, 1) normalized on the free column
  CHECK(k1[0][0] * Q(1) == k1[0][1] * Q(-2));
}

TEST_CASE("rank-nullity on random matrices") {
  std::mt19937 gen(5);
  for (int t = 0; t < 30; ++t) {
    int r = 1 + static_cast<int>(gen() % 5), c = 1 + static_cast<int>(gen() % 5);
    MQ m = random_matrix(gen, r, c);
    auto ker = kernel_basis(m);
    CHECK(rank(m) + static_cast<int>(ker.size()) == c);
    for (const auto& v : ker) {
      Vector<Q> img = m.apply(v);
      for (const Q& x : img) CHECK(x.is_zero());
    }
    // kernel vectors are independent
    CHECK(subspace_from_vectors(ker, c).dim() == static_cast<int>(ker.size()));
  }
}

TEST_CASE("image basis spans the columns") {
  std::mt19937 gen(17);
  for (int t = 0; t < 20; ++t) {
    MQ m = random_matrix(gen, 1 + static_cast<int>(gen() % 4), 1 + static_cast<int>(gen() % 4));
    auto im = image_basis(m);
    CHECK(static_cast<int>(im.size()) == rank(m));
    Subspace<Q> s = subspace_from_vectors(im, m.rows());
    for (int j = 0; j < m.cols(); ++j) CHECK(subspace_contains(s, m.col(j)));
  }
}

TEST_CASE("solve_linear") {
  MQ a = MQ::from_rows({{1, 2}, {3, 4}});
  auto x = solve_linear(a, Vector<Q>{Q(5), Q(11)});
  REQUIRE(x.has_value());
  Vector<Q> b = a.apply(*x);
  CHECK(b[0] == Q(5));
  CHECK(b[1] == Q(11));
  // inconsistent system
  MQ c = MQ::from_rows({{1, 2}, {2, 4}});
  CHECK_FALSE(solve_linear(c, Vector<Q>{Q(1), Q(3)}).has_value());
}

TEST_CASE("spin closure examples") {
  // ({e1}, {identity}) -> span{e1}
  Vector<Q> e1{Q(1), Q(0), Q(0)};
  auto s1 = spin_closure<Q>({e1}, {MQ::identity(3)}, 3);
  CHECK(s1.dim() == 1);
  CHECK(subspace_contains(s1, e1));
  // cyclic shift spins e1 to the full space
  MQ shift(3, 3);
  shift.at(1, 0) = Q(1);
  shift.at(2, 1) = Q(1);
  shift.at(0, 2) = Q(1);
  CHECK(spin_closure<Q>({e1}, {shift}, 3).dim() == 3);
  // no generators -> zero subspace
  CHECK(spin_closure<Q>({}, {shift}, 3).dim() == 0);
  // dimension mismatch is an error
  CHECK_THROWS_AS(spin_closure<Q>({e1}, {MQ::identity(2)}, 3), Error);
}

TEST_CASE("spin closure output is operator invariant") {
  std::mt19937 gen(23);
  for (int t = 0; t < 10; ++t) {
    int n = 2 + static_cast<int>(gen() % 4);
    std::vector<MQ> ops{random_matrix(gen, n, n, 3), random_matrix(gen, n, n, 3)};
    std::vector<Vector<Q>> vs;
    for (int k = 0; k < 2; ++k) {
      MQ col = random_matrix(gen, n, 1, 3);
      vs.push_back(col.col(0));
    }
    Subspace<Q> s = spin_closure<Q>(vs, ops, n);
    for (const auto& op : ops)
      for (int i = 0; i < s.dim(); ++i) {
        Vector<Q> red = coset_reduce(op.apply(s.rows.row(i)), s);
        for (const Q& x : red) CHECK(x.is_zero());
      }
    for (const auto& v : vs) CHECK(subspace_contains(s, v));
  }
}

TEST_CASE("coset_reduce gives canonical representatives") {
  Subspace<Q> s = subspace_from_rows(MQ::from_rows({{1, 0, 2}, {0, 1, 3}}));
  Vector<Q> v{Q(4), Q(5), Q(6)};
  Vector<Q> r = coset_reduce(v, s);
  CHECK(r[0].is_zero());
  CHECK(r[1].is_zero());
  CHECK(r[2] == Q(6) - Q(4) * Q(2) - Q(5) * Q(3));
  // reducing a second time changes nothing
  CHECK(coset_reduce(r, s) == r);
}

TEST_CASE("subspace_equal is basis independent") {
  MQ a = MQ::from_rows({{1, 1, 0}, {0, 0, 1}});
  MQ b = MQ::from_rows({{2, 2, 2}, {0, 0, 5}, {2, 2, 7}});
  CHECK(subspace_equal(subspace_from_rows(a), subspace_from_rows(b)));
  MQ c = MQ::from_rows({{1, 0, 0}});
  CHECK_FALSE(subspace_equal(subspace_from_rows(a), subspace_from_rows(c)));
}

TEST_CASE("sparse incremental rref agrees with dense rank") {
  std::mt19937 gen(31);
  for (int t = 0; t < 20; ++t) {
    int r = 1 + static_cast<int>(gen() % 6), c = 1 + static_cast<int>(gen() % 6);
    MQ m = random_matrix(gen, r, c, 5);
    SparseRref<Q> acc;
    for (int i = 0; i < r; ++i) {
      SparseVec<Q> v;
      for (int j = 0; j < c; ++j)
        if (!m.at(i, j).is_zero()) v.emplace_back(j, m.at(i, j));
      acc.insert(std::move(v));
    }
    CHECK(acc.rank() == rank(m));
    // a vector in the row space reduces to nothing
    SparseVec<Q> row0;
    for (int j = 0; j < c; ++j)
      if (!m.at(0, j).is_zero()) row0.emplace_back(j, m.at(0, j));
    CHECK(acc.reduce(row0).empty());
  }
}

TEST_CASE("prime field linear algebra mirrors the rational one on integer input") {
  Fp::set_modulus(101);
  Matrix<Fp> m(3, 3);
  MQ mq(3, 3);
  std::mt19937 gen(41);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long v = static_cast<long>(gen() % 9) - 4;
      m.at(i, j) = Fp(v);
      mq.at(i, j) = Q(v);
    }
  // ranks agree away from bad primes; 101 is big enough for 3x3 entries in [-4,4]
  CHECK(rank(m) == rank(mq));
}

TEST_SUITE_END();
