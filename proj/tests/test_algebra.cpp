#include <doctest.h>

#include <functional>
#include <set>

#include "corner/algebra.hpp"
#include "oracles.hpp"

using namespace corner;
using Q = Rational;

namespace {

Quiver star2() {
  return Quiver({"0", "1", "2"}, "0", {{"a", 0, 1}, {"b", 0, 2}});
}

Quiver one_loop() {
  return Quiver({"0"}, "0", {{"x", 0, 0}});
}

std::shared_ptr<const FDAlgebra<Q>> mckay_b_killed(int m, int level) {
  DoubledQuiver dq = framed_mckay_quiver(m);
  auto rels = preprojective_relations<Q>(dq, default_signs(dq));
  rels = kill_arrows(dq.q, std::move(rels), {"b*"});
  return truncated_algebra(dq.q, std::move(rels), level);
}

}  // namespace

TEST_SUITE_BEGIN("algebra");

TEST_CASE("path word composability is enforced") {
  Quiver q = star2();
  CHECK_THROWS_AS(PathWord::of_arrows(q, {q.arrow_index("a"), q.arrow_index("b")}), Error);
  PathWord w = PathWord::of_arrows(q, {q.arrow_index("a")});
  CHECK(w.tail() == 0);
  CHECK(w.head(q) == 1);
}

TEST_CASE("relation elements must be parallel") {
  Quiver q = star2();
  std::vector<RelationTerm<Q>> terms;
  terms.push_back({Q(1), PathWord::of_arrows(q, {0})});
  terms.push_back({Q(1), PathWord::of_arrows(q, {1})});
  CHECK_THROWS_AS(RelationElement<Q>::make(q, terms), Error);
  // zero coefficients are dropped
  auto r = RelationElement<Q>::make(q, {{Q(0), PathWord::of_arrows(q, {0})}});
  CHECK(r.terms.empty());
}

TEST_CASE("star quiver S2 truncated at level 1") {
  auto a = truncated_algebra<Q>(star2(), {}, 1);
  CHECK(a->dim() == 5);
  std::multiset<int> lengths;
  for (const auto& b : a->basis) lengths.insert(b.rep.length());
  CHECK(lengths == std::multiset<int>{0, 0, 0, 1, 1});
  a->check_invariants();
  // e1 * a = a = a * e0
  int ia = -1;
  for (int i = 0; i < a->dim(); ++i)
    if (a->basis[i].rep.length() == 1 && a->basis[i].head == 1) ia = i;
  REQUIRE(ia >= 0);
  CHECK(a->mul(a->idem[1], ia) == SparseVec<Q>{{ia, Q(1)}});
  CHECK(a->mul(ia, a->idem[0]) == SparseVec<Q>{{ia, Q(1)}});
  CHECK(a->mul(ia, ia).empty());
}

TEST_CASE("one loop truncated at level 2") {
  auto a = truncated_algebra<Q>(one_loop(), {}, 2);
  CHECK(a->dim() == 3);
  a->check_invariants();
  int x = -1, x2 = -1;
  for (int i = 0; i < a->dim(); ++i) {
    if (a->basis[i].rep.length() == 1) x = i;
    if (a->basis[i].rep.length() == 2) x2 = i;
  }
  REQUIRE(x >= 0);
  REQUIRE(x2 >= 0);
  CHECK(a->mul(x, x) == SparseVec<Q>{{x2, Q(1)}});
  CHECK(a->mul(x, x2).empty());  // x^3 = 0 under the truncation
  CHECK(a->mul(x2, x2).empty());
}

TEST_CASE("framed McKay quiver shapes") {
  DoubledQuiver d2 = framed_mckay_quiver(2);
  CHECK(d2.q.vertex_count() == 3);
  CHECK(d2.q.vertex_name(d2.q.source()) == "inf");
  CHECK(d2.q.arrow_count() == 6);  // doubled pair of 2 edges between 0 and 1, plus b, b*
  int between = 0;
  for (const auto& ar : d2.q.arrows())
    if (ar.tail != 0 && ar.head != 0) ++between;
  CHECK(between == 4);

  DoubledQuiver d3 = framed_mckay_quiver(3);
  CHECK(d3.q.vertex_count() == 4);
  CHECK(d3.q.arrow_count() == 8);  // 6 cycle arrows + b + b*

  for (int m = 2; m <= 6; ++m) CHECK(framed_mckay_quiver(m).q.vertex_count() == m + 1);
  CHECK_THROWS_AS(framed_mckay_quiver(1), Error);

  // the involution swaps orientation
  for (int a = 0; a < d3.q.arrow_count(); ++a) {
    int as = d3.star[a];
    CHECK(d3.star[as] == a);
    CHECK(d3.q.arrow(a).tail == d3.q.arrow(as).head);
    CHECK(d3.q.arrow(a).head == d3.q.arrow(as).tail);
  }
}

TEST_CASE("preprojective relation for a single doubled loop") {
  Quiver q({"0"}, "0", {{"x", 0, 0}, {"x*", 0, 0}});
  DoubledQuiver dq{q, {1, 0}};
  auto rels = preprojective_relations<Q>(dq, default_signs(dq));
  REQUIRE(rels.size() == 1);
  REQUIRE(rels[0].terms.size() == 2);
  // eps(x) x x* + eps(x*) x* x = x x* - x* x
  const auto& t0 = rels[0].terms[0];
  const auto& t1 = rels[0].terms[1];
  CHECK(t0.coeff == Q(1));
  CHECK(t0.word.arrows == std::vector<int>{1, 0});  // x* applied first
  CHECK(t1.coeff == Q(-1));
  CHECK(t1.word.arrows == std::vector<int>{0, 1});
}

TEST_CASE("preprojective relations on the framed McKay quiver") {
  DoubledQuiver dq = framed_mckay_quiver(2);
  auto rels = preprojective_relations<Q>(dq, default_signs(dq));
  CHECK(static_cast<int>(rels.size()) == dq.q.vertex_count());  // one relation per vertex
  // at the framing vertex the only arrow heading in is b*, so the relation
  // is the single term eps(b*) b* b
  const auto& rinf = rels[0];
  REQUIRE(rinf.terms.size() == 1);
  CHECK(rinf.terms[0].coeff == Q(-1));
  int b = dq.q.arrow_index("b"), bs = dq.q.arrow_index("b*");
  CHECK(rinf.terms[0].word.arrows == std::vector<int>{b, bs});
  // invalid sign maps are rejected
  std::vector<int> bad(static_cast<std::size_t>(dq.q.arrow_count()), 1);
  CHECK_THROWS_AS(preprojective_relations<Q>(dq, bad), Error);
}

TEST_CASE("kill_arrows") {
  DoubledQuiver dq = framed_mckay_quiver(2);
  auto rels = preprojective_relations<Q>(dq, default_signs(dq));
  std::size_t before = rels.size();
  auto more = kill_arrows(dq.q, rels, {"b*"});
  CHECK(more.size() == before + 1);
  auto same = kill_arrows(dq.q, rels, {});
  CHECK(same.size() == before);
  CHECK_THROWS_AS(kill_arrows(dq.q, rels, {"nope"}), Error);
}

TEST_CASE("killed arrow disappears from the basis") {
  auto a = mckay_b_killed(2, 4);
  int bs = a->quiver->arrow_index("b*");
  for (const auto& el : a->basis)
    for (int arrow : el.rep.arrows) CHECK(arrow != bs);
  // its class is zero
  CHECK(a->arrow_class[static_cast<std::size_t>(bs)].empty());
}

TEST_CASE("McKay truncations match the brute-force closure oracle") {
  DoubledQuiver d2 = framed_mckay_quiver(2);
  auto rels2 = kill_arrows(d2.q, preprojective_relations<Q>(d2, default_signs(d2)), {"b*"});
  auto a24 = truncated_algebra<Q>(d2.q, rels2, 4);
  CHECK(a24->dim() == oracles::truncated_dim_oracle<Q>(d2.q, rels2, 4));
  CHECK(a24->dim() == 41);
  auto a22 = truncated_algebra<Q>(d2.q, rels2, 2);
  CHECK(a22->dim() == oracles::truncated_dim_oracle<Q>(d2.q, rels2, 2));
  CHECK(a22->dim() == 16);

  DoubledQuiver d3 = framed_mckay_quiver(3);
  auto rels3 = kill_arrows(d3.q, preprojective_relations<Q>(d3, default_signs(d3)), {"b*"});
  auto a32 = truncated_algebra<Q>(d3.q, rels3, 2);
  CHECK(a32->dim() == oracles::truncated_dim_oracle<Q>(d3.q, rels3, 2));
  auto a34 = truncated_algebra<Q>(d3.q, rels3, 4);
  CHECK(a34->dim() == 56);
}

TEST_CASE("shipped algebras satisfy the structural invariants") {
  truncated_algebra<Q>(star2(), {}, 1)->check_invariants();
  truncated_algebra<Q>(one_loop(), {}, 3)->check_invariants();
  mckay_b_killed(2, 3)->check_invariants();
  mckay_b_killed(3, 3)->check_invariants(20000);
}

TEST_CASE("products of level+1 arrows vanish") {
  auto a = mckay_b_killed(2, 3);
  const Quiver& q = *a->quiver;
  // multiply arrow classes along every composable word of length level+1
  std::function<void(int, int, const SparseVec<Q>&)> walk = [&](int at, int len, const SparseVec<Q>& acc) {
    if (len == a->level + 1) {
      CHECK(acc.empty());
      return;
    }
    for (int ar = 0; ar < q.arrow_count(); ++ar) {
      if (q.arrow(ar).tail != at) continue;
      walk(q.arrow(ar).head, len + 1, a->mul_elems(a->arrow_class[static_cast<std::size_t>(ar)], acc));
    }
  };
  for (int v = 0; v < q.vertex_count(); ++v) walk(v, 0, SparseVec<Q>{{a->idem[static_cast<std::size_t>(v)], Q(1)}});
}

TEST_CASE("relations rewritten into the basis vanish") {
  auto a = mckay_b_killed(3, 3);
  for (const auto& rel : a->relations) {
    std::map<int, Q> acc;
    for (const auto& t : rel.terms) {
      if (t.word.length() > a->level) continue;
      SparseVec<Q> cls{{a->idem[static_cast<std::size_t>(t.word.tail())], Q(1)}};
      for (int ar : t.word.arrows) cls = a->mul_elems(a->arrow_class[static_cast<std::size_t>(ar)], cls);
      for (const auto& [k, c] : cls) {
        auto& slot = acc.try_emplace(k, Q(0)).first->second;
        slot += t.coeff * c;
      }
    }
    for (const auto& [k, c] : acc) CHECK(c.is_zero());
  }
}

TEST_CASE("cornering at the full vertex set is the identity") {
  auto a = mckay_b_killed(2, 3);
  Cornered<Q> c = corner_algebra(a, {0, 1, 2});
  CHECK(c.algebra->dim() == a->dim());
  for (int i = 0; i < a->dim(); ++i) CHECK(c.embed[static_cast<std::size_t>(i)] == i);
  for (int i = 0; i < a->dim(); ++i)
    for (int j = 0; j < a->dim(); ++j) CHECK(c.algebra->mul(i, j) == a->mul(i, j));
}

TEST_CASE("cornering the star quiver") {
  auto a = truncated_algebra<Q>(star2(), {}, 1);
  Cornered<Q> c01 = corner_algebra(a, {0, 1});
  CHECK(c01.algebra->dim() == 3);  // e0, e1, a
  std::multiset<int> lens;
  for (const auto& b : c01.algebra->basis) lens.insert(b.rep.length());
  CHECK(lens == std::multiset<int>{0, 0, 1});
  c01.algebra->check_invariants();

  Cornered<Q> c0 = corner_algebra(a, {0});
  CHECK(c0.algebra->dim() == 1);

  CHECK_THROWS_AS(corner_algebra(a, std::vector<int>{1, 2}), Error);  // distinguished vertex missing
}

TEST_CASE("corner multiplication agrees with the parent through the embedding") {
  auto a = mckay_b_killed(2, 3);
  Cornered<Q> c = corner_algebra(a, {0, 1});  // {inf, 0}
  const auto& ca = *c.algebra;
  for (int i = 0; i < ca.dim(); ++i)
    for (int j = 0; j < ca.dim(); ++j) {
      SparseVec<Q> embedded;
      for (const auto& [k, cf] : ca.mul(i, j)) embedded.emplace_back(c.embed[static_cast<std::size_t>(k)], cf);
      std::sort(embedded.begin(), embedded.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      CHECK(embedded == a->mul(c.embed[static_cast<std::size_t>(i)], c.embed[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("prime field algebra construction") {
  Fp::set_modulus(10007);
  DoubledQuiver dq = framed_mckay_quiver(2);
  auto rels = kill_arrows(dq.q, preprojective_relations<Fp>(dq, default_signs(dq)), {"b*"});
  auto a = truncated_algebra<Fp>(dq.q, rels, 3);
  // away from bad primes the dimension matches the rational computation
  CHECK(a->dim() == mckay_b_killed(2, 3)->dim());
  a->check_invariants();
}

TEST_SUITE_END();
