#include <doctest.h>

#include <map>

#include "ucat/codeset.hpp"
#include "ucat/poly.hpp"
#include "ucat/universe.hpp"

using namespace ucat;

namespace {

Obj nset(Codeset& cs, uint32_t n) {
  std::vector<TermId> es;
  for (uint32_t i = 0; i < n; ++i) es.push_back(cs.arena().atom(i));
  return cs.fin_obj(std::move(es));
}

bool is_bijective(Codeset& cs, Mor f) {
  if (!cs.enumerable(cs.dom(f)) || !cs.enumerable(cs.cod(f))) return false;
  std::map<TermId, int> hits;
  for (TermId e : cs.elems(cs.dom(f))) ++hits[cs.apply(f, e)];
  if (hits.size() != cs.elems(cs.cod(f)).size()) return false;
  for (auto& [k, v] : hits)
    if (v != 1) return false;
  return true;
}

uint64_t lcg(uint64_t& s) {
  s = s * 6364136223846793005ull + 1442695040888963407ull;
  return s >> 33;
}

}  // namespace

TEST_CASE("polynomial sizes follow the section-count formula") {
  Codeset cs;
  TermArena& a = cs.arena();
  Obj two = nset(cs, 2), one = nset(cs, 1), three = nset(cs, 3);
  Mor p = cs.fin_mor_fn(two, one, [&](TermId) { return a.atom(0); });

  SUBCASE("P_p(1) is iso to the base") {
    Polynomial pl = polynomial_apply(cs, p, one);
    CHECK(cs.size_of(pl.obj) == 1);
  }
  SUBCASE("|X|^{fiber} over a point") {
    Polynomial pl = polynomial_apply(cs, p, three);
    CHECK(cs.size_of(pl.obj) == 9);
  }
  SUBCASE("identity base gives B x X") {
    Obj four = nset(cs, 4);
    Polynomial pl = polynomial_apply(cs, cs.identity(four), three);
    CHECK(cs.size_of(pl.obj) == 12);
  }
  SUBCASE("sum-over-base oracle on a random instance") {
    uint64_t s = 7;
    for (int trial = 0; trial < 10; ++trial) {
      uint32_t nb = 1 + uint32_t(lcg(s) % 3);
      uint32_t ne = uint32_t(lcg(s) % 5);
      Obj b = nset(cs, nb);
      std::vector<TermId> ees;
      std::vector<uint32_t> owner(ne);
      for (uint32_t i = 0; i < ne; ++i) {
        ees.push_back(a.pair(a.atom(i), a.star()));
        owner[i] = uint32_t(lcg(s) % nb);
      }
      Obj e = cs.fin_obj(ees);
      Mor p2 = cs.fin_mor_fn(e, b, [&](TermId t) {
        return a.atom(owner[a.data(a.fst(t)).nat]);
      });
      uint32_t nx = uint32_t(lcg(s) % 4);
      Obj x = nset(cs, nx);
      Polynomial pl = polynomial_apply(cs, p2, x);
      size_t want = 0;
      for (TermId belem : cs.elems(b)) {
        size_t fib = cs.fiber_elems(p2, belem)->size();
        size_t pw = 1;
        for (size_t i = 0; i < fib; ++i) pw *= nx;
        want += pw;
      }
      CHECK(cs.size_of(pl.obj) == want);
    }
  }
}

TEST_CASE("gen_comp on identities degenerates to isomorphisms") {
  Codeset cs;
  Obj b = nset(cs, 3);
  GenCompData gc = gen_comp(cs, cs.identity(b), cs.identity(b));
  CHECK(is_bijective(cs, gc.t1));
  CHECK(is_bijective(cs, gc.t2));
}

TEST_CASE("gen_comp on the prop universe matches the enumeration oracle") {
  Codeset cs;
  UniversalMap p0 = finite_umap(cs, cs.prop_universe().name);
  GenCompData gc = gen_comp(cs, p0.pi, p0.pi);
  // bot = (pi0)_*(tU0 x U0): one table for PBot, two for PTop
  REQUIRE(cs.size_of(gc.bot) == 3);
  // composite fibers over the three classified points have sizes 0, 0, 1
  std::map<TermId, size_t> fiber_sizes;
  for (TermId t : cs.elems(gc.top)) ++fiber_sizes[cs.apply(gc.composite, t)];
  CHECK(cs.size_of(gc.top) == 1);
  size_t total = 0;
  for (TermId w : cs.elems(gc.bot)) total += fiber_sizes[w];
  CHECK(total == 1);
}

TEST_CASE("gen_comp composite fibers reproduce sigma counts") {
  Codeset cs;
  TermArena& a = cs.arena();
  Obj one = nset(cs, 1), two = nset(cs, 2), three = nset(cs, 3);
  Mor p = cs.fin_mor_fn(two, one, [&](TermId) { return a.atom(0); });
  Mor pp = cs.fin_mor_fn(three, one, [&](TermId) { return a.atom(0); });
  GenCompData gc = gen_comp(cs, pp, p);
  // over a classified point (pair of composable pullbacks), the composite
  // fiber is the sum over the p-fiber of p'-fiber sizes
  for (TermId w : cs.elems(gc.bot)) {
    size_t composite_fiber = 0;
    for (TermId t : cs.elems(gc.top))
      if (cs.apply(gc.composite, t) == w) ++composite_fiber;
    // oracle: sum over the table entries of the p'-fiber size of the value
    size_t want = 0;
    for (auto& [k, v] : a.table_entries(a.snd(w))) {
      TermId bprime_pt = a.snd(v);
      want += cs.fiber_elems(pp, bprime_pt)->size();
    }
    CHECK(composite_fiber == want);
  }
}

TEST_CASE("pair_names reconstructs named towers handle-exactly") {
  Codeset cs;
  TermArena& a = cs.arena();
  UniversalMap um = code_umap(cs);
  GenCompData gc = gen_comp(cs, um.pi, um.pi);

  SUBCASE("6 -> 2 -> 1 tower") {
    Obj one = nset(cs, 1);
    Mor n1 = cs.fin_mor(one, um.u, {a.enum_code(2)});
    ExtData e1 = um.extend(n1);
    Mor n2 = cs.fin_mor_fn(e1.obj, um.u, [&](TermId) { return a.enum_code(3); });
    ExtData e2 = um.extend(n2);
    NamedStage s1{e1.proj, n1, e1.var};
    NamedStage s2{e2.proj, n2, e2.var};
    Mor pairing = pair_names(cs, gc, s1, s2);
    auto chk = verify_pair_names(cs, gc, s1, s2, pairing);
    CHECK(chk.over_base);
    CHECK(chk.reproduced_mid);
    CHECK(chk.reproduced_top);
    CHECK(cs.size_of(e2.obj) == 6);
  }
  SUBCASE("random named towers, sizes <= 6") {
    uint64_t s = 31;
    for (int trial = 0; trial < 20; ++trial) {
      uint32_t n0 = 1 + uint32_t(lcg(s) % 2);
      Obj x0 = nset(cs, n0);
      Mor n1 = cs.fin_mor_fn(x0, um.u, [&](TermId) {
        return a.enum_code(uint32_t(lcg(s) % 3));
      });
      ExtData e1 = um.extend(n1);
      Mor n2 = cs.fin_mor_fn(e1.obj, um.u, [&](TermId) {
        return a.enum_code(uint32_t(lcg(s) % 3));
      });
      ExtData e2 = um.extend(n2);
      NamedStage s1{e1.proj, n1, e1.var};
      NamedStage s2{e2.proj, n2, e2.var};
      Mor pairing = pair_names(cs, gc, s1, s2);
      auto chk = verify_pair_names(cs, gc, s1, s2, pairing);
      CHECK(chk.pass());
    }
  }
  SUBCASE("a perturbed pairing is rejected") {
    Obj one = nset(cs, 1);
    Mor n1 = cs.fin_mor(one, um.u, {a.enum_code(2)});
    ExtData e1 = um.extend(n1);
    Mor n2 = cs.fin_mor_fn(e1.obj, um.u, [&](TermId) { return a.enum_code(1); });
    ExtData e2 = um.extend(n2);
    NamedStage s1{e1.proj, n1, e1.var};
    NamedStage s2{e2.proj, n2, e2.var};
    Mor pairing = pair_names(cs, gc, s1, s2);
    // perturb one table entry of the image
    TermId w = cs.apply(pairing, a.atom(0));
    auto tbl = cs.arena().table_entries(a.snd(w));
    tbl[0].second = a.pair(a.fst(tbl[0].second), a.enum_code(4));
    TermId wbad = a.pair(a.fst(w), a.fun(tbl));
    REQUIRE(cs.has_elem(gc.bot, wbad));
    Mor bad = cs.fin_mor(one, gc.bot, {wbad});
    auto chk = verify_pair_names(cs, gc, s1, s2, bad);
    CHECK(chk.over_base);
    CHECK(chk.reproduced_mid);
    CHECK(!chk.reproduced_top);
  }
}

TEST_CASE("distributivity of pushforwards") {
  Codeset cs;
  TermArena& a = cs.arena();

  SUBCASE("identity instance passes") {
    Obj b = nset(cs, 2);
    GenCompData gc = gen_comp(cs, cs.identity(b), cs.identity(b));
    auto rep = distributivity_check(cs, gc);
    CHECK(rep.pass());
  }
  SUBCASE("prop-universe instance passes with equal sizes") {
    UniversalMap p0 = finite_umap(cs, cs.prop_universe().name);
    GenCompData gc = gen_comp(cs, p0.pi, p0.pi);
    auto rep = distributivity_check(cs, gc);
    CHECK(rep.pass());
    CHECK(rep.lhs_size == rep.rhs_size);
    // oracle: both sides are pi0_*(tU0 x tU0), which has 1 + 1 = 2 tables
    CHECK(rep.lhs_size == 2);
  }
  SUBCASE("finite sets instance passes") {
    Obj one = nset(cs, 1), two = nset(cs, 2), three = nset(cs, 3);
    Mor p = cs.fin_mor_fn(two, one, [&](TermId) { return a.atom(0); });
    Mor pp = cs.fin_mor_fn(three, two, [&](TermId t) {
      return a.atom(a.data(t).nat % 2);
    });
    GenCompData gc = gen_comp(cs, pp, p);
    auto rep = distributivity_check(cs, gc);
    CHECK(rep.pass());
  }
  SUBCASE("a corrupted evaluation leg fails") {
    Obj one = nset(cs, 1), two = nset(cs, 2), three = nset(cs, 3);
    Mor p = cs.fin_mor_fn(two, one, [&](TermId) { return a.atom(0); });
    Mor pp = cs.fin_mor_fn(three, two, [&](TermId t) {
      return a.atom(a.data(t).nat % 2);
    });
    GenCompData gc = gen_comp(cs, pp, p);
    // swap the E'-component through a fiber-crossing permutation of E'
    Mor sigma = cs.fin_mor_fn(three, three, [&](TermId t) {
      return a.atom((a.data(t).nat + 1) % 3);
    });
    GenCompData bad = gc;
    bad.top_to_exe = cs.pair_morph(cs.dom(gc.p), cs.dom(gc.pprime),
                                   cs.compose(gc.mid_to_e, gc.t2),
                                   cs.compose(sigma, gc.top_to_eprime));
    auto rep = distributivity_check(cs, bad);
    CHECK(!rep.pass());
  }
}

TEST_CASE("pushforward adjunction verified by double enumeration") {
  Codeset cs;
  TermArena& a = cs.arena();
  uint64_t s = 11;
  int done = 0;
  while (done < 25) {
    uint32_t nb = 1 + uint32_t(lcg(s) % 2);
    uint32_t ne = uint32_t(lcg(s) % 3);
    uint32_t nysz = uint32_t(lcg(s) % 3);
    Obj b = nset(cs, nb);
    std::vector<TermId> ees;
    std::vector<uint32_t> owner(ne);
    for (uint32_t i = 0; i < ne; ++i) {
      ees.push_back(a.pair(a.atom(i), a.star()));
      owner[i] = uint32_t(lcg(s) % nb);
    }
    Obj e = cs.fin_obj(ees);
    Mor p = cs.fin_mor_fn(e, b, [&](TermId t) {
      return a.atom(owner[a.data(a.fst(t)).nat]);
    });
    // X over E
    std::vector<TermId> xes;
    std::vector<uint32_t> xowner;
    uint32_t nx = uint32_t(lcg(s) % 4);
    for (uint32_t i = 0; i < nx && ne > 0; ++i) {
      xes.push_back(a.pair(a.atom(100 + i), a.star()));
      xowner.push_back(uint32_t(lcg(s) % ne));
    }
    Obj x = cs.fin_obj(xes);
    Mor xm = cs.fin_mor_fn(x, e, [&](TermId t) {
      return ees[xowner[a.data(a.fst(t)).nat - 100]];
    });
    // Y over B
    Obj y = nset(cs, nysz);
    Mor ym = cs.fin_mor_fn(y, b, [&](TermId t) {
      return a.atom(a.data(t).nat % nb);
    });
    auto rep = verify_pushforward_adjunction(cs, p, xm, ym);
    CHECK(rep.bijective);
    ++done;
  }
}

TEST_CASE("Beck-Chevalley: pushforward commutes with base change on probes") {
  Codeset cs;
  TermArena& a = cs.arena();
  Obj b = nset(cs, 2), bp = nset(cs, 2);
  Obj e = cs.fin_obj({a.pair(a.atom(0), a.star()), a.pair(a.atom(1), a.star()),
                      a.pair(a.atom(2), a.star())});
  Mor p = cs.fin_mor_fn(e, b, [&](TermId t) {
    return a.atom(a.data(a.fst(t)).nat % 2);
  });
  Obj x = nset(cs, 2);
  Mor xm = cs.fin_mor_fn(x, e, [&](TermId t) {
    return cs.elems(e)[a.data(t).nat % 3];
  });
  Mor g = cs.fin_mor_fn(bp, b, [&](TermId t) { return a.atom(1 - a.data(t).nat); });
  // route 1: push forward, then pull back along g
  auto pf = cs.pushforward(p, xm);
  auto r1 = cs.pullback(pf.proj, g);
  // route 2: pull p and x back along g, then push forward
  auto pe = cs.pullback(p, g);
  Mor pprime = pe.to_g;  // over B'
  auto px = cs.pullback(xm, pe.to_f);
  Mor xprime = px.to_g;  // over E'
  auto pf2 = cs.pushforward(pprime, xprime);
  REQUIRE(cs.size_of(r1.apex) == cs.size_of(pf2.total));
  // the canonical comparison: fiberwise section counts agree over B'
  for (TermId bb : cs.elems(bp)) {
    size_t c1 = 0, c2 = 0;
    for (TermId t : cs.elems(r1.apex))
      if (cs.apply(r1.to_g, t) == bb) ++c1;
    for (TermId t : cs.elems(pf2.total))
      if (cs.apply(pf2.proj, t) == bb) ++c2;
    CHECK(c1 == c2);
  }
}
