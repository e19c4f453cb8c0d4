#include <doctest.h>

#include "ucat/codeset.hpp"
#include "ucat/univalence.hpp"

using namespace ucat;

namespace {

void make_dup2(Codeset& cs) {
  TermArena& a = cs.arena();
  TermId c2 = a.enum_code(2);
  TermId cbis = a.sigma_code(c2, {{a.atom(0), a.ptop()}, {a.atom(1), a.ptop()}});
  cs.make_finite_universe("dup2", {c2, cbis, a.pbot(), a.ptop()},
                          [&a](TermId, TermId x, TermId y) {
                            return x == y ? a.ptop() : a.pbot();
                          });
}

}  // namespace

TEST_CASE("the prop universe is pointed univalent inside the code universe") {
  Codeset cs;
  auto amb = build_itt_code(cs);
  auto inner = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*inner);
  UAVerdict v = check_univalence_sdf(*amb, *inner, h, UAMode::Pointed);
  REQUIRE(v.kind == UAVerdict::Structure);
  CHECK(v.endpoint_via_composite);
  CHECK(v.search_space > 0);
  IdFactor src_id = amb->id_of(v.src_amb);
  CHECK(cs.equal_on_points(v.homotopy, src_id.refl));
  UAVerdict b = check_univalence_sdf(*amb, *inner, h, UAMode::Book);
  CHECK(b.kind == UAVerdict::Structure);
}

TEST_CASE("the duplicated universe is refuted for both modes") {
  Codeset cs;
  make_dup2(cs);
  auto amb = build_itt_code(cs);
  auto inner = build_itt_finite(cs, "dup2");
  HIsoData h = build_hiso(*inner);
  UAVerdict p = check_univalence_sdf(*amb, *inner, h, UAMode::Pointed);
  REQUIRE(p.kind == UAVerdict::Refuted);
  CHECK(!p.endpoint_via_composite);
  CHECK(p.search_space > 0);
  UAVerdict b = check_univalence_sdf(*amb, *inner, h, UAMode::Book);
  REQUIRE(b.kind == UAVerdict::Refuted);
  UAVerdict p2 = check_univalence_sdf(*amb, *inner, h, UAMode::Pointed);
  CHECK(p2.search_space == p.search_space);
  CHECK(p2.detail == p.detail);
}

TEST_CASE("the univalence structure solves probe problems like the oracle") {
  Codeset cs;
  auto amb = build_itt_code(cs);
  auto inner = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*inner);
  UAVerdict v = check_univalence_sdf(*amb, *inner, h, UAMode::Pointed);
  REQUIRE(v.lift);
  IdFactor id_u0 = amb->id_of(*amb->um.classify(cs.bang(inner->um.u)));
  Mor idu0 = cs.identity(inner->um.u);
  LiftInstance inst{idu0, id_u0.evd_fib, id_u0.refl, h.srctgt};
  Mor f1 = v.lift->solve(inst);
  auto bf = brute_force_filler(cs, *v.lift, inst, false);
  REQUIRE(bf.filler);
  CHECK(cs.equal_on_points(f1, *bf.filler));
  CHECK(verify_uniformity(*v.lift, inst, cs.points(inner->um.u)));
}

TEST_CASE("type-theoretic univalence round trip on the prop universe") {
  Codeset cs;
  auto amb = build_itt_code(cs);
  auto inner = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*inner);
  UAVerdict v = check_univalence_sdf(*amb, *inner, h, UAMode::Pointed);
  REQUIRE(v.kind == UAVerdict::Structure);
  TTUAData tt = ua_to_tt(*amb, *inner, h, v);
  CHECK(tt.pointed);
  CHECK(cs.equal_on_points(cs.compose(tt.s, h.trv), tt.id_u0.refl));
  CHECK(cs.equal_on_points(cs.compose(tt.h_s, h.trv),
                           cs.compose(tt.id_hiso.refl, h.trv)));
  CHECK(cs.equal_on_points(cs.compose(tt.id_u0.evd, tt.s), h.srctgt));
  CHECK(cs.equal_on_points(cs.compose(h.srctgt, tt.j), tt.id_u0.evd));
  LeftLift back = tt_to_ua(*amb, *inner, h, tt, UAMode::Pointed);
  LiftInstance inst{cs.identity(cs.cod(h.srctgt)), tt.id_u0.evd_fib, tt.id_u0.refl,
                    h.srctgt};
  Mor f1 = back.solve(inst);
  auto bf = brute_force_filler(cs, back, inst, false);
  REQUIRE(bf.filler);
  CHECK(cs.equal_on_points(f1, *bf.filler));
}

TEST_CASE("pointed funext on the prop universe with TT exactness") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  TermArena& a = cs.arena();
  UniversalMap& um = itt->um;
  PointedFunext pfx = build_pointed_funext(*itt);
  CHECK(cs.size_of(pfx.poly_tu) == cs.size_of(pfx.poly_id));
  Obj one = cs.terminal();
  Mor na = cs.fin_mor(one, um.u, {a.ptop()});
  Fibrancy q = um.canonical_fib(na);
  Mor ne = cs.fin_mor_fn(cs.dom(q.p), um.u, [&](TermId) { return a.ptop(); });
  Fibrancy e = um.canonical_fib(ne);
  FunextComparison cmp = funext_comparison(*itt, q, e);
  CHECK(cs.size_of(cs.dom(cmp.phi)) == cs.size_of(cs.cod(cmp.phi)));
  FunextTT ttm = funext_tt_maps(*itt, cmp);
  CHECK(ttm.s_exact);
  for (Mor pt : cs.points(cs.dom(cmp.phi)))
    CHECK(cs.compose(ttm.r, cs.compose(cmp.phi, pt)) == pt);
}

TEST_CASE("pointed funext on the code universe, q : 2 -> 1 with fibers (1,2)") {
  Codeset cs;
  auto itt = build_itt_code(cs);
  TermArena& a = cs.arena();
  UniversalMap& um = itt->um;
  Obj one = cs.terminal();
  Mor nq = cs.fin_mor(one, um.u, {a.enum_code(2)});
  Fibrancy q = um.canonical_fib(nq);
  Mor ne = cs.fin_mor_fn(cs.dom(q.p), um.u, [&](TermId t) {
    return a.data(a.snd(t)).nat == 0 ? a.enum_code(1) : a.enum_code(2);
  });
  Fibrancy e = um.canonical_fib(ne);
  FunextComparison cmp = funext_comparison(*itt, q, e);
  FunextTT ttm = funext_tt_maps(*itt, cmp);
  CHECK(ttm.s_exact);
  Fibrancy y = e;
  LeftLift ls_s = iso_left_lift(cs, um, cs.identity(cs.dom(e.p)), cs.dom(q.p), e.p, e.p,
                                cs.identity(cs.dom(e.p)));
  LeftLift fam = ptdfunext_family(*itt, build_pointed_funext(*itt), q, y, e,
                                  cs.identity(cs.dom(e.p)), ls_s);
  Backend::Pf qe_pf = cs.pushforward(q.p, e.p);
  Fibrancy qe = itt->push_name(q, e);
  LiftInstance inst{cs.identity(cs.cod(q.p)), qe, cs.identity(qe_pf.total),
                    cs.compose(qe.p, cs.identity(qe_pf.total))};
  Mor f1 = fam.solve(inst);
  auto bf = brute_force_filler(cs, fam, inst, false);
  REQUIRE(bf.filler);
  CHECK(cs.equal_on_points(cs.compose(qe.p, f1), cs.compose(qe.p, *bf.filler)));
}
