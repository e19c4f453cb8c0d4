#include <doctest.h>

#include "ucat/codeset.hpp"
#include "ucat/lifting.hpp"
#include "ucat/typestructs.hpp"

using namespace ucat;

namespace {

Obj nset(Codeset& cs, uint32_t n) {
  std::vector<TermId> es;
  for (uint32_t i = 0; i < n; ++i) es.push_back(cs.arena().atom(i));
  return cs.fin_obj(std::move(es));
}

}  // namespace

TEST_CASE("iso lifts solve identity-on-identity problems by the identity") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  UniversalMap& um = itt->um;
  LeftLift ls = iso_left_lift(cs, um, cs.identity(um.tu), um.u, um.pi, um.pi,
                              cs.identity(um.tu));
  Fibrancy target{um.pi, cs.identity(um.u), cs.identity(um.tu)};
  Backend::Pb ck = cs.pullback(um.pi, cs.identity(um.u));
  Mor u = ck.to_f;
  Mor v = cs.compose(um.pi, ck.to_f);
  LiftInstance inst{cs.identity(um.u), target, u, v};
  Mor filler = ls.solve(inst);
  CHECK(cs.equal_on_points(filler, u));
  auto bf = brute_force_filler(cs, ls, inst, false);
  REQUIRE(bf.filler);
  CHECK(cs.equal_on_points(*bf.filler, filler));
}

TEST_CASE("J solves its generic problem and matches the oracle") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  UniversalMap& um = itt->um;
  const IdFactor& gen = itt->id->generic;
  Fibrancy target{um.pi, cs.identity(um.u), cs.identity(um.tu)};
  Mor x = um.pi;  // reindex by tU0 over U0
  Backend::Pb ck = cs.pullback(um.pi, x);
  Backend::Pb cl = cs.pullback(gen.id_anchor, x);
  Mor u = ck.to_f;
  Mor v = cs.compose(gen.id_anchor, cl.to_f);
  LiftInstance inst{x, target, u, v};
  Mor filler = gen.refl_lift.solve(inst);
  auto bf = brute_force_filler(cs, gen.refl_lift, inst, false);
  REQUIRE(bf.filler);
  CHECK(cs.equal_on_points(filler, *bf.filler));
  // uniformity on point reindexings of the context
  std::vector<Mor> ts = cs.points(um.tu);
  CHECK(verify_uniformity(gen.refl_lift, inst, ts));
}

TEST_CASE("a problem with a non-commuting square is rejected before solving") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  UniversalMap& um = itt->um;
  const IdFactor& gen = itt->id->generic;
  Fibrancy target{um.pi, cs.identity(um.u), cs.identity(um.tu)};
  Mor x = cs.identity(um.u);
  Backend::Pb ck = cs.pullback(um.pi, x);
  Backend::Pb cl = cs.pullback(gen.id_anchor, x);
  // v sends everything to PBot, making the square fail over PTop
  Mor v = cs.fin_mor_fn(cl.apex, um.u, [&](TermId) { return cs.arena().pbot(); });
  LiftInstance inst{x, target, ck.to_f, v};
  CHECK_THROWS_WITH_AS(gen.refl_lift.solve(inst), doctest::Contains("does not commute"),
                       std::runtime_error);
}

TEST_CASE("brute force provides no-filler proofs") {
  Codeset cs;
  TermArena& a = cs.arena();
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  UniversalMap& um = itt->um;
  Obj zero = nset(cs, 0), one = cs.terminal();
  Mor i = cs.fin_mor(zero, one, {});
  LeftLift shape;
  shape.C = &cs;
  shape.um = &um;
  shape.i = i;
  shape.s = one;
  shape.k_anchor = cs.bang(zero);
  shape.l_anchor = cs.identity(one);
  shape.full = false;
  Mor name = cs.fin_mor(one, um.u, {a.pbot()});
  Fibrancy target = um.canonical_fib(name);
  Backend::Pb ck = cs.pullback(shape.k_anchor, cs.identity(one));
  Backend::Pb cl = cs.pullback(shape.l_anchor, cs.identity(one));
  Mor u = cs.fin_mor(ck.apex, cs.dom(target.p), {});
  Mor v = cs.fin_mor_fn(cl.apex, one, [&](TermId) { return a.star(); });
  auto bf = brute_force_filler(cs, shape, {cs.identity(one), target, u, v}, true);
  CHECK(!bf.filler);
  CHECK(bf.witness.find("empty fiber") != std::string::npos);
  CHECK(bf.space == 0);
}

TEST_CASE("composition closure agrees with the oracle in the lower triangle") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  UniversalMap& um = itt->um;
  const IdFactor& gen = itt->id->generic;
  LeftLift second = iso_left_lift(cs, um, cs.identity(gen.idobj), um.u, gen.id_anchor,
                                  gen.id_anchor, cs.identity(gen.idobj));
  LeftLift comp = compose_left(gen.refl_lift, second);
  Fibrancy target{um.pi, cs.identity(um.u), cs.identity(um.tu)};
  Mor x = um.pi;
  Backend::Pb ck = cs.pullback(um.pi, x);
  Backend::Pb cl = cs.pullback(gen.id_anchor, x);
  LiftInstance inst{x, target, ck.to_f, cs.compose(gen.id_anchor, cl.to_f)};
  Mor filler = comp.solve(inst);
  auto bf = brute_force_filler(cs, comp, inst, true);
  REQUIRE(bf.filler);
  CHECK(cs.equal_on_points(cs.compose(target.p, filler), cs.compose(target.p, *bf.filler)));
}

TEST_CASE("sdr_check on identity data passes with the constant homotopy") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  UniversalMap& um = itt->um;
  Fibrancy efib{um.pi, cs.identity(um.u), cs.identity(um.tu)};
  IdFactor idf = itt->id_of(efib);
  auto rep = sdr_check(cs, um, idf, cs.identity(um.tu), cs.identity(um.tu),
                       TransferMode::Pointed, itt->oracle());
  CHECK(rep.pass);
  REQUIRE(rep.homotopy != kNone);
  CHECK(cs.equal_on_points(rep.homotopy, idf.refl));
  // the produced structure solves probe problems like the oracle does
  REQUIRE(rep.lift);
  Fibrancy target{um.pi, cs.identity(um.u), cs.identity(um.tu)};
  Mor x = cs.identity(um.u);
  Backend::Pb ck = cs.pullback(um.pi, x);
  Mor u = ck.to_f;
  Mor v = cs.compose(um.pi, ck.to_f);
  LiftInstance inst{x, target, u, v};
  Mor f1 = rep.lift->solve(inst);
  auto bf = brute_force_filler(cs, *rep.lift, inst, false);
  REQUIRE(bf.filler);
  CHECK(cs.equal_on_points(f1, *bf.filler));
}

TEST_CASE("sdr_check refutes when no strict homotopy exists") {
  Codeset cs;
  TermArena& a = cs.arena();
  TermId c2 = a.enum_code(2);
  TermId cbis = a.sigma_code(c2, {{a.atom(0), a.ptop()}, {a.atom(1), a.ptop()}});
  cs.make_finite_universe("dup2", {c2, cbis, a.pbot(), a.ptop()},
                          [&a](TermId, TermId x, TermId y) {
                            return x == y ? a.ptop() : a.pbot();
                          });
  auto itt2 = build_itt_finite(cs, "dup2");
  UniversalMap& um2 = itt2->um;
  Obj one = cs.terminal();
  Mor nc = cs.fin_mor(one, um2.u, {c2});
  Mor nb = cs.fin_mor(one, um2.u, {cbis});
  ExtData ec = um2.extend(nc);
  ExtData eb = um2.extend(nb);
  Fibrancy cfib = um2.canonical_fib(nc);
  IdFactor idf = itt2->id_of(cfib);
  Mor f = cs.fin_mor_fn(ec.obj, eb.obj, [&](TermId t) {
    return a.pair(a.star(), a.pair(a.snd(t), a.star()));
  });
  Mor g = cs.fin_mor_fn(eb.obj, ec.obj, [&](TermId t) {
    return a.pair(a.star(), a.fst(a.snd(t)));
  });
  auto ok = sdr_check(cs, um2, idf, f, g, TransferMode::Pointed, itt2->oracle());
  CHECK(ok.pass);

  // a genuine refutation: collapse the 2-set onto a point of itself; the
  // search hits the empty Id fiber over (Atom 0, Atom 1)
  Mor ntop = cs.fin_mor(one, um2.u, {a.ptop()});
  ExtData etop = um2.extend(ntop);
  Mor fcol = cs.fin_mor_fn(ec.obj, etop.obj, [&](TermId) {
    return a.pair(a.star(), a.star());
  });
  Mor gsec = cs.fin_mor_fn(etop.obj, ec.obj, [&](TermId) {
    return a.pair(a.star(), a.atom(0));
  });
  auto bad = sdr_check(cs, um2, idf, fcol, gsec, TransferMode::Pointed, itt2->oracle());
  CHECK(!bad.pass);
  CHECK(bad.detail.find("empty fiber") != std::string::npos);
  (void)eb;
}
