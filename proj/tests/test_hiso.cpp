#include <doctest.h>

#include <map>

#include "ucat/codeset.hpp"
#include "ucat/hiso.hpp"

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

TEST_CASE("HId of the prop universe has one point per code") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*itt);
  CHECK(cs.size_of(h.hid) == 2);
  auto rep = representability_hid(*itt, h, cs.terminal());
  CHECK(rep.pass);
  CHECK(rep.hom_count == 2);
}

TEST_CASE("HIso of the prop universe is the trivial one") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*itt);
  CHECK(cs.size_of(h.hiso) == 2);
  CHECK(cs.equal_on_points(cs.compose(h.src, h.trv), cs.identity(itt->um.u)));
  CHECK(cs.equal_on_points(cs.compose(h.tgt, h.trv), cs.identity(itt->um.u)));
  TermArena& a = cs.arena();
  Mor pbot = cs.point(itt->um.u, a.pbot());
  Mor ptop = cs.point(itt->um.u, a.ptop());
  CHECK(hiso_fiber_count(*itt, h, pbot, pbot).structural == 1);
  CHECK(hiso_fiber_count(*itt, h, ptop, ptop).structural == 1);
  CHECK(hiso_fiber_count(*itt, h, ptop, pbot).structural == 0);
  CHECK(hiso_fiber_count(*itt, h, pbot, ptop).structural == 0);
}

TEST_CASE("representability of HIso and trv on probes") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*itt);
  for (Probe p : probes012(cs)) {
    auto rep = representability_hiso(*itt, h, p.obj);
    CHECK(rep.pass);
    auto tr = representability_trv(*itt, h, p.obj);
    CHECK(tr.pass);
  }
  auto rep1 = representability_hiso(*itt, h, cs.terminal());
  CHECK(rep1.hom_count == 2);
}

TEST_CASE("endpoint fibrancy by the composite argument") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*itt);
  EndpointFibrancy ef = endpoint_fibrancy(*itt, h);
  CHECK(ef.srctgt.p == h.srctgt);
  auto probes = probes012(cs);
  CHECK(verify_fibrancy(cs, itt->um, ef.srctgt, probes).pass());
  CHECK(verify_fibrancy(cs, itt->um, ef.hom_ab, probes).pass());
  TermArena& a = cs.arena();
  std::map<std::pair<TermId, TermId>, size_t> sizes;
  for (TermId t : cs.elems(h.hiso)) {
    TermId st = cs.apply(h.srctgt, t);
    TermId sa = cs.apply(h.uxu.p1, st);
    TermId sb = cs.apply(h.uxu.p2, st);
    ++sizes[{sa, sb}];
  }
  CHECK(sizes[{a.pbot(), a.pbot()}] == 1);
  CHECK(sizes[{a.ptop(), a.ptop()}] == 1);
  CHECK(sizes.size() == 2);
}

TEST_CASE("the duplicated universe has two cross isos with forced inverses") {
  Codeset cs;
  make_dup2(cs);
  auto itt = build_itt_finite(cs, "dup2");
  CHECK(!itt->sigma);  // the universe cannot name its generic composites
  HIsoData h = build_hiso(*itt);  // objects still exist
  TermArena& a = cs.arena();
  TermId c2 = a.enum_code(2);
  TermId cbis = a.sigma_code(c2, {{a.atom(0), a.ptop()}, {a.atom(1), a.ptop()}});
  Mor pc = cs.point(itt->um.u, c2);
  Mor pb = cs.point(itt->um.u, cbis);
  auto cross = hiso_fiber_count(*itt, h, pc, pb);
  CHECK(cross.structural == 2);
  CHECK(cross.brute == 2);
  auto diag = hiso_fiber_count(*itt, h, pc, pc);
  CHECK(diag.structural == 2);  // the two automorphisms, inverses forced
  auto topbot = hiso_fiber_count(*itt, h, cs.point(itt->um.u, a.ptop()),
                                 cs.point(itt->um.u, a.pbot()));
  CHECK(topbot.structural == 0);
  // HId fiber over c2: only the identity admits a strict homotopy
  size_t hid_over_c2 = 0;
  for (Mor pt : cs.points(h.hid)) {
    Mor endoel = cs.compose(h.hid_to_endo, pt);
    TermId w = cs.point_elem(endoel);
    if (a.fst(w) == c2) ++hid_over_c2;
  }
  CHECK(hid_over_c2 == 1);
}

TEST_CASE("a corrupted HIso is caught by the representability count") {
  Codeset cs;
  auto itt = build_itt_finite(cs, cs.prop_universe().name);
  HIsoData h = build_hiso(*itt);
  std::vector<TermId> es = cs.elems(h.hiso);
  REQUIRE(es.size() == 2);
  es.pop_back();
  Obj thin = cs.fin_obj(es);
  HIsoData bad = h;
  bad.hiso = thin;
  Mor incl = cs.fin_mor_fn(thin, h.hiso, [&](TermId t) { return t; });
  bad.hiso_to_lh = cs.compose(h.hiso_to_lh, incl);
  bad.hiso_to_rh = cs.compose(h.hiso_to_rh, incl);
  bad.hiso_to_hom = cs.compose(h.hiso_to_hom, incl);
  bad.srctgt = cs.compose(h.srctgt, incl);
  bad.src = cs.compose(h.src, incl);
  bad.tgt = cs.compose(h.tgt, incl);
  auto rep = representability_hiso(*itt, bad, cs.terminal());
  CHECK(!rep.pass);
  CHECK(rep.detail.find("counts differ") != std::string::npos);
}
