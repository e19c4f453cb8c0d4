#include <doctest.h>

#include "ucat/term.hpp"

using namespace ucat;

TEST_CASE("hash consing identifies structurally equal terms") {
  TermArena a;
  TermId p1 = a.pair(a.atom(0), a.star());
  TermId p2 = a.pair(a.atom(0), a.star());
  CHECK(p1 == p2);
  CHECK(a.pair(a.atom(1), a.star()) != p1);
}

TEST_CASE("fun tables canonicalize by key order") {
  TermArena a;
  TermId f1 = a.fun({{a.atom(1), a.star()}, {a.atom(0), a.star()}});
  TermId f2 = a.fun({{a.atom(0), a.star()}, {a.atom(1), a.star()}});
  CHECK(f1 == f2);
}

TEST_CASE("structural order is total and deterministic") {
  TermArena a;
  // intern in one order
  TermId x = a.pair(a.atom(3), a.atom(1));
  TermId y = a.pair(a.atom(2), a.atom(9));
  CHECK(a.term_less(y, x));
  CHECK(!a.term_less(x, y));
  CHECK(!a.term_less(x, x));

  TermArena b;
  // intern in the other order; comparisons must agree
  TermId y2 = b.pair(b.atom(2), b.atom(9));
  TermId x2 = b.pair(b.atom(3), b.atom(1));
  CHECK(b.term_less(y2, x2));
}

TEST_CASE("s-expression round trip is bit exact") {
  TermArena a;
  std::vector<TermId> terms = {
      a.star(),
      a.atom(7),
      a.enum_code(3),
      a.pbot(),
      a.ptop(),
      a.refl(a.atom(0)),
      a.pair(a.atom(0), a.pair(a.star(), a.atom(1))),
      a.fun({{a.atom(0), a.star()}, {a.atom(1), a.refl(a.atom(1))}}),
      a.sigma_code(a.enum_code(2), {{a.atom(0), a.ptop()}, {a.atom(1), a.pbot()}}),
      a.pi_code(a.enum_code(1), {{a.atom(0), a.enum_code(4)}}),
      a.id_code(a.enum_code(2), a.atom(0), a.atom(1)),
  };
  for (TermId t : terms) {
    std::string s = a.show(t);
    CHECK(a.parse(s) == t);
    CHECK(a.show(a.parse(s)) == s);
  }
}

TEST_CASE("parse errors carry position info") {
  TermArena a;
  CHECK_THROWS_WITH_AS(a.parse("(Pair Star"), doctest::Contains("offset"),
                       std::runtime_error);
  CHECK_THROWS_AS(a.parse("(Bogus 1)"), std::runtime_error);
  CHECK_THROWS_AS(a.parse("Star Star"), std::runtime_error);
}

TEST_CASE("random round trips at depth <= 3") {
  TermArena a;
  // a tiny deterministic generator
  uint64_t s = 12345;
  auto rnd = [&s](uint32_t n) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return uint32_t((s >> 33) % n);
  };
  std::function<TermId(int)> gen = [&](int depth) -> TermId {
    if (depth == 0) {
      switch (rnd(3)) {
        case 0: return a.atom(rnd(4));
        case 1: return a.star();
        default: return a.enum_code(rnd(4));
      }
    }
    switch (rnd(4)) {
      case 0: return a.pair(gen(depth - 1), gen(depth - 1));
      case 1: return a.refl(gen(depth - 1));
      case 2: return a.fun({{a.atom(0), gen(depth - 1)}, {a.atom(1), gen(depth - 1)}});
      default: return a.id_code(a.enum_code(2), a.atom(rnd(2)), a.atom(rnd(2)));
    }
  };
  for (int i = 0; i < 200; ++i) {
    TermId t = gen(3);
    CHECK(a.parse(a.show(t)) == t);
  }
}
