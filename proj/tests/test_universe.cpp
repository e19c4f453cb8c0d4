#include <doctest.h>

#include "ucat/codeset.hpp"
#include "ucat/universe.hpp"

using namespace ucat;

namespace {

Obj nset(Codeset& cs, uint32_t n) {
  std::vector<TermId> es;
  for (uint32_t i = 0; i < n; ++i) es.push_back(cs.arena().atom(i));
  return cs.fin_obj(std::move(es));
}

std::vector<Probe> probes012(Codeset& cs) {
  return {{nset(cs, 0)}, {nset(cs, 1)}, {nset(cs, 2)}};
}

}  // namespace

TEST_CASE("extension along names") {
  Codeset cs;
  TermArena& a = cs.arena();
  UniversalMap um = code_umap(cs);
  Obj one = nset(cs, 1), three = nset(cs, 3);

  SUBCASE("empty name gives the empty context") {
    Mor name = cs.fin_mor(one, um.u, {a.enum_code(0)});
    ExtData e = um.extend(name);
    CHECK(cs.size_of(e.obj) == 0);
  }
  SUBCASE("constant Enum 2 over a 3-element context") {
    Mor name = cs.fin_mor_fn(three, um.u, [&](TermId) { return a.enum_code(2); });
    ExtData e = um.extend(name);
    CHECK(cs.size_of(e.obj) == 6);
    auto rep = verify_fibrancy(cs, um, um.canonical_fib(name), probes012(cs));
    CHECK(rep.pass());
  }
  SUBCASE("singleton fibers give an iso extension") {
    UniversalMap p0 = finite_umap(cs, cs.prop_universe().name);
    Mor name = cs.fin_mor_fn(three, p0.u, [&](TermId) { return a.ptop(); });
    ExtData e = um.extend(cs.compose(cs.fin_mor_fn(p0.u, um.u, [&](TermId c) { return c; }),
                                     name));
    // the extension along a PTop-valued name has one element per context elem
    CHECK(cs.size_of(e.obj) == 3);
  }
}

TEST_CASE("extension is split: extending along A.f equals pulling back") {
  Codeset cs;
  TermArena& a = cs.arena();
  UniversalMap um = code_umap(cs);
  Obj three = nset(cs, 3), two = nset(cs, 2);
  Mor name = cs.fin_mor(three, um.u,
                        {a.enum_code(1), a.enum_code(2), a.enum_code(0)});
  Mor f = cs.fin_mor_fn(two, three, [&](TermId t) { return t; });
  ExtData e = um.extend(name);
  // canonical pullback of the extension projection along f
  auto pb = cs.pullback(e.proj, f);
  ExtData e2 = um.extend(cs.compose(name, f));
  CHECK(pb.apex == e2.obj);
  CHECK(pb.to_g == e2.proj);
  // the classifier reuses the composite name on the nose
  auto fib = um.classify(pb.to_g);
  REQUIRE(fib);
  CHECK(fib->name == cs.compose(name, f));
}

TEST_CASE("enum naming of finite-fibered maps") {
  Codeset cs;
  TermArena& a = cs.arena();
  UniversalMap um = code_umap(cs);
  Obj two = nset(cs, 2), one = nset(cs, 1), five = nset(cs, 5), zero = nset(cs, 0);

  SUBCASE("identity names constantly at Enum 1") {
    auto fib = um.classify(cs.identity(two));
    REQUIRE(fib);
    for (Mor pt : cs.points(two))
      CHECK(cs.apply(fib->name, cs.point_elem(pt)) == a.enum_code(1));
    CHECK(verify_fibrancy(cs, um, *fib, probes012(cs)).pass());
  }
  SUBCASE("2+3 over 2 names fibers pointwise") {
    Mor p = cs.fin_mor_fn(five, two, [&](TermId t) {
      return a.atom(a.data(t).nat < 2 ? 0 : 1);
    });
    auto fib = um.classify(p);
    REQUIRE(fib);
    CHECK(cs.apply(fib->name, a.atom(0)) == a.enum_code(2));
    CHECK(cs.apply(fib->name, a.atom(1)) == a.enum_code(3));
    CHECK(verify_fibrancy(cs, um, *fib, probes012(cs)).pass());
  }
  SUBCASE("empty fiber names at Enum 0") {
    Mor p = cs.fin_mor(zero, one, {});
    auto fib = um.classify(p);
    REQUIRE(fib);
    CHECK(cs.apply(fib->name, a.atom(0)) == a.enum_code(0));
  }
}

TEST_CASE("fibrancy point maps are order-preserving bijections") {
  Codeset cs;
  TermArena& a = cs.arena();
  UniversalMap um = code_umap(cs);
  Obj four = nset(cs, 4), two = nset(cs, 2);
  Mor p = cs.fin_mor_fn(four, two, [&](TermId t) { return a.atom(a.data(t).nat % 2); });
  auto fib = um.classify(p);
  REQUIRE(fib);
  // the canonical replacement composes back to the original map
  for (TermId e : cs.elems(four)) {
    TermId te = cs.apply(fib->point, e);
    CHECK(a.fst(te) == cs.apply(fib->name, cs.apply(p, e)));
  }
}

TEST_CASE("internal universe verdicts") {
  Codeset cs;
  UniversalMap amb = code_umap(cs);
  UniversalMap prop = finite_umap(cs, cs.prop_universe().name);
  auto probes = probes012(cs);

  SUBCASE("the prop universe is internal to the code universe") {
    auto r = check_internal_universe(cs, amb, prop, probes);
    CHECK(std::holds_alternative<InternalUniverse>(r));
  }
  SUBCASE("the prop universe is not internal to itself") {
    auto r = check_internal_universe(cs, prop, prop, probes);
    REQUIRE(std::holds_alternative<Refutation>(r));
    // the base U0 -> 1 has a fiber of size 2, which no proposition names
    CHECK(std::get<Refutation>(r).reason.find("base") != std::string::npos);
  }
  SUBCASE("the code universe is not internal to itself") {
    auto r = check_internal_universe(cs, amb, amb, probes);
    REQUIRE(std::holds_alternative<Refutation>(r));
  }
}

TEST_CASE("custom universes validate their Id tables") {
  Codeset cs;
  TermArena& a = cs.arena();
  TermId c = a.enum_code(2);
  TermId cbis = a.sigma_code(c, {{a.atom(0), a.ptop()}, {a.atom(1), a.ptop()}});
  TermId bot = a.pbot(), top = a.ptop();

  SUBCASE("the duplicated 2-set universe is well-formed with prop Id codes") {
    auto& fu = cs.make_finite_universe(
        "dup2", {c, cbis, bot, top},
        [bot, top](TermId, TermId x, TermId y) { return x == y ? top : bot; });
    CHECK(cs.size_of(fu.u) == 4);
    CHECK(cs.size_of(fu.tu) == 5);  // fibers sized 2 + 2 + 0 + 1
  }
  SUBCASE("an Id assignment of the wrong size is rejected") {
    CHECK_THROWS_AS(cs.make_finite_universe(
                        "bad", {c, bot, top},
                        [top](TermId, TermId, TermId) { return top; }),
                    std::runtime_error);
  }
  SUBCASE("an Id assignment escaping the universe is rejected") {
    CHECK_THROWS_AS(cs.make_finite_universe(
                        "bad2", {c, top},
                        [&a, top](TermId, TermId x, TermId y) {
                          return x == y ? top : a.pbot();
                        }),
                    std::runtime_error);
  }
}
