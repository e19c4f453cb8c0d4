#include <doctest.h>

#include <set>

#include "ucat/codeset.hpp"

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

TEST_CASE("el decodes codes per the definitional clauses") {
  Codeset cs;
  TermArena& a = cs.arena();
  CHECK(cs.el(a.enum_code(3)) ==
        std::vector<TermId>{a.atom(0), a.atom(1), a.atom(2)});
  // el(Sigma(Enum 2, [PTop, PBot])) = {Pair(Atom 0, Star)}
  TermId sc = a.sigma_code(a.enum_code(2), {{a.atom(0), a.ptop()}, {a.atom(1), a.pbot()}});
  CHECK(cs.el(sc) == std::vector<TermId>{a.pair(a.atom(0), a.star())});
  // el(Id(Enum 2, Atom 0, Atom 1)) is empty
  CHECK(cs.el(a.id_code(a.enum_code(2), a.atom(0), a.atom(1))).empty());
  CHECK(cs.el(a.id_code(a.enum_code(2), a.atom(1), a.atom(1))) ==
        std::vector<TermId>{a.refl(a.atom(1))});
}

TEST_CASE("sigma and pi decodings match the counting oracle on random codes") {
  Codeset cs;
  TermArena& a = cs.arena();
  uint64_t s = 99;
  auto rnd = [&s](uint32_t n) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return uint32_t((s >> 33) % n);
  };
  std::function<TermId(int)> gen_code = [&](int depth) -> TermId {
    if (depth == 0) {
      switch (rnd(3)) {
        case 0: return a.enum_code(rnd(3));
        case 1: return a.pbot();
        default: return a.ptop();
      }
    }
    TermId base = gen_code(0);
    std::vector<std::pair<TermId, TermId>> tbl;
    for (TermId x : cs.el(base)) tbl.emplace_back(x, gen_code(depth - 1));
    switch (rnd(3)) {
      case 0: return a.sigma_code(base, tbl);
      case 1: return a.pi_code(base, tbl);
      default: {
        const auto& es = cs.el(base);
        if (es.empty()) return base;
        return a.id_code(base, es[rnd(uint32_t(es.size()))], es[rnd(uint32_t(es.size()))]);
      }
    }
  };
  for (int i = 0; i < 100; ++i) {
    TermId c = gen_code(3);
    const TermData& d = a.data(c);
    size_t n = cs.el(c).size();
    if (d.tag == Tag::SigmaC) {
      size_t want = 0;
      for (auto& [k, v] : a.table_entries(c)) want += cs.el(v).size();
      CHECK(n == want);
    } else if (d.tag == Tag::PiC) {
      size_t want = 1;
      for (auto& [k, v] : a.table_entries(c)) want *= cs.el(v).size();
      CHECK(n == want);
    } else if (d.tag == Tag::IdC) {
      CHECK(n <= 1);
      CHECK((n == 1) == (d.kids[1] == d.kids[2]));
    }
  }
}

TEST_CASE("pullback of identities is the object itself up to iso") {
  Codeset cs;
  Obj b = nset(cs, 3);
  Mor idb = cs.identity(b);
  auto pb = cs.pullback(idb, idb);
  CHECK(cs.size_of(pb.apex) == 3);
  for (Mor pt : cs.points(pb.apex))
    CHECK(cs.compose(pb.to_f, pt) == cs.compose(pb.to_g, pt));
}

TEST_CASE("pullback over a point multiplies fibers") {
  Codeset cs;
  Obj two = nset(cs, 2), three = nset(cs, 3), one = nset(cs, 1);
  Mor f = cs.fin_mor_fn(two, one, [&](TermId) { return cs.arena().atom(0); });
  Mor g = cs.fin_mor_fn(three, one, [&](TermId) { return cs.arena().atom(0); });
  auto pb = cs.pullback(f, g);
  CHECK(cs.size_of(pb.apex) == 6);
  auto rep = verify_pullback_square(cs, Square{pb.to_f, pb.to_g, f, g}, probes012(cs));
  CHECK(rep.pass());
  CHECK(rep.cones > 0);
}

TEST_CASE("pullback along an empty map is empty") {
  Codeset cs;
  Obj b = nset(cs, 2), zero = nset(cs, 0);
  Mor f = cs.identity(b);
  Mor g = cs.fin_mor(zero, b, {});
  auto pb = cs.pullback(f, g);
  CHECK(cs.size_of(pb.apex) == 0);
}

TEST_CASE("hom enumeration counts and canonical order") {
  Codeset cs;
  Obj zero = nset(cs, 0), one = nset(cs, 1), two = nset(cs, 2), three = nset(cs, 3);
  CHECK(cs.hom(zero, three).size() == 1);
  CHECK(cs.hom(two, three).size() == 9);
  CHECK(cs.hom(one, three).size() == 3);
  auto hs = cs.hom(two, two);
  CHECK(hs.size() == 4);
  CHECK(cs.apply(hs[0], cs.arena().atom(0)) == cs.arena().atom(0));
  CHECK(cs.apply(hs[0], cs.arena().atom(1)) == cs.arena().atom(0));
  CHECK(cs.apply(hs[1], cs.arena().atom(0)) == cs.arena().atom(0));
  CHECK(cs.apply(hs[1], cs.arena().atom(1)) == cs.arena().atom(1));
  std::set<Mor> dedup(hs.begin(), hs.end());
  CHECK(dedup.size() == hs.size());
}

TEST_CASE("hom into the lazy universe is refused") {
  Codeset cs;
  Obj one = nset(cs, 1);
  CHECK_THROWS_AS(cs.hom(one, cs.code_universe().u), std::runtime_error);
}

TEST_CASE("verify_pullback_square flags corrupted apexes") {
  Codeset cs;
  TermArena& a = cs.arena();
  Obj two = nset(cs, 2), three = nset(cs, 3), one = nset(cs, 1);
  Mor f = cs.fin_mor_fn(two, one, [&](TermId) { return a.atom(0); });
  Mor g = cs.fin_mor_fn(three, one, [&](TermId) { return a.atom(0); });
  auto pb = cs.pullback(f, g);

  SUBCASE("extra element breaks uniqueness") {
    std::vector<TermId> es = cs.elems(pb.apex);
    es.push_back(a.pair(a.atom(0), a.atom(0)));  // duplicate image of an existing corner
    Obj fat = cs.fin_obj(es);
    // fat == apex after dedup; instead add a genuinely fresh element
    es = cs.elems(pb.apex);
    es.push_back(a.atom(99));
    fat = cs.fin_obj(es);
    Mor top = cs.fin_mor_fn(fat, two, [&](TermId t) {
      return a.tag(t) == Tag::Pair ? a.fst(t) : a.atom(0);
    });
    Mor left = cs.fin_mor_fn(fat, three, [&](TermId t) {
      return a.tag(t) == Tag::Pair ? a.snd(t) : a.atom(0);
    });
    auto rep = verify_pullback_square(cs, Square{top, left, f, g}, probes012(cs));
    CHECK(rep.verdict == Verdict::FailNonUnique);
  }
  SUBCASE("proper subobject loses a factorization") {
    std::vector<TermId> es = cs.elems(pb.apex);
    es.pop_back();
    Obj thin = cs.fin_obj(es);
    Mor top = cs.fin_mor_fn(thin, two, [&](TermId t) { return a.fst(t); });
    Mor left = cs.fin_mor_fn(thin, three, [&](TermId t) { return a.snd(t); });
    auto rep = verify_pullback_square(cs, Square{top, left, f, g}, probes012(cs));
    CHECK(rep.verdict == Verdict::FailNoFactor);
  }
  SUBCASE("non-commuting square is reported distinctly") {
    Obj two2 = nset(cs, 2);
    Mor top = cs.fin_mor_fn(two2, two, [&](TermId t) { return t; });
    Mor left = cs.fin_mor_fn(two2, three, [&](TermId t) { return t; });
    Obj pair_base = nset(cs, 2);
    Mor fbad = cs.fin_mor_fn(two, pair_base, [&](TermId t) { return t; });
    Mor gbad = cs.fin_mor_fn(three, pair_base, [&](TermId) { return a.atom(1); });
    auto rep = verify_pullback_square(cs, Square{top, left, fbad, gbad}, probes012(cs));
    CHECK(rep.verdict == Verdict::FailNotCommuting);
  }
}

TEST_CASE("pasting chosen pullbacks keeps the probe check green") {
  Codeset cs;
  TermArena& a = cs.arena();
  Obj four = nset(cs, 4), two = nset(cs, 2), one = nset(cs, 1);
  Mor q = cs.fin_mor_fn(four, two, [&](TermId t) { return a.atom(a.data(t).nat / 2); });
  Mor h = cs.fin_mor_fn(two, one, [&](TermId) { return a.atom(0); });
  Obj three = nset(cs, 3);
  Mor g = cs.fin_mor_fn(three, one, [&](TermId) { return a.atom(0); });
  auto pb1 = cs.pullback(g, h);   // apex over (three, two)
  auto pb2 = cs.pullback(pb1.to_g, q);
  Mor rect_top = cs.compose(pb1.to_f, pb2.to_f);
  auto rep = verify_pullback_square(
      cs, Square{rect_top, pb2.to_g, g, cs.compose(h, q)}, probes012(cs));
  CHECK(rep.pass());
}

TEST_CASE("pushforward fibers are section tables") {
  Codeset cs;
  TermArena& a = cs.arena();
  Obj two = nset(cs, 2), one = nset(cs, 1), five = nset(cs, 5);
  Mor p = cs.fin_mor_fn(two, one, [&](TermId) { return a.atom(0); });
  Mor x = cs.fin_mor_fn(five, two, [&](TermId t) {
    return a.atom(a.data(t).nat < 2 ? 0 : 1);
  });
  auto pf = cs.pushforward(p, x);
  CHECK(cs.size_of(pf.total) == 6);

  Mor x2 = cs.fin_mor_fn(five, two, [&](TermId t) { return a.atom(a.data(t).nat % 2); });
  auto pf2 = cs.pushforward(cs.identity(two), x2);
  CHECK(cs.size_of(pf2.total) == 5);

  Obj zero = nset(cs, 0);
  Mor pz = cs.fin_mor(zero, one, {});
  auto pf3 = cs.pushforward(pz, cs.identity(zero));
  CHECK(cs.size_of(pf3.total) == 1);
}

TEST_CASE("coproducts are tagged unions with injections") {
  Codeset cs;
  Obj two = nset(cs, 2), three = nset(cs, 3);
  auto cp = cs.coproduct({two, three});
  CHECK(cs.size_of(cp.obj) == 5);
  Mor m = cs.copair(cp, {cs.bang(two), cs.bang(three)}, cs.terminal());
  CHECK(m == cs.bang(cp.obj));
}

TEST_CASE("compose respects identities and associativity on finite domains") {
  Codeset cs;
  TermArena& a = cs.arena();
  Obj two = nset(cs, 2), three = nset(cs, 3), four = nset(cs, 4);
  Mor f = cs.fin_mor_fn(two, three, [&](TermId t) { return t; });
  Mor g = cs.fin_mor_fn(three, four, [&](TermId t) { return a.atom(a.data(t).nat + 1); });
  Mor h = cs.identity(four);
  CHECK(cs.compose(f, cs.identity(two)) == f);
  CHECK(cs.compose(cs.identity(three), f) == f);
  CHECK(cs.compose(h, cs.compose(g, f)) == cs.compose(cs.compose(h, g), f));
}
