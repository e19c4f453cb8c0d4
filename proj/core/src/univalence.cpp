#include "ucat/univalence.hpp"

namespace ucat {

UAVerdict check_univalence_sdf(Itt& amb, Itt& inner, const HIsoData& h, UAMode mode) {
  UAVerdict out;
  Backend& c = *amb.C;
  if (!inner.id) {
    out.detail = "inner universe has no pre-Id structure";
    return out;
  }
  if (!amb.id) {
    out.detail = "ambient universe has no Id structure";
    return out;
  }
  // (src,tgt) fibrancy against the ambient universe: by the composite
  // argument through the internal-universe conversion when the inner universe
  // has Sigma and Pi; by direct classification otherwise
  if (inner.sigma && inner.pi) {
    EndpointFibrancy ef = endpoint_fibrancy(inner, h);
    auto iu = check_internal_universe(c, amb.um, inner.um, {});
    if (std::holds_alternative<Refutation>(iu)) {
      out.detail = "inner universe is not internal: " + std::get<Refutation>(iu).reason;
      return out;
    }
    const InternalUniverse& internal = std::get<InternalUniverse>(iu);
    out.srctgt_amb = Fibrancy{ef.srctgt.p,
                              c.compose(internal.el_fib.name, ef.srctgt.name),
                              c.compose(internal.el_fib.point, ef.srctgt.point)};
    out.endpoint_via_composite = true;
  } else {
    auto direct = amb.um.classify(h.srctgt);
    if (!direct) {
      out.detail = "(src,tgt) is not classifiable against the ambient universe";
      return out;
    }
    out.srctgt_amb = *direct;
  }
  auto srcfib = amb.um.classify(h.src);
  if (!srcfib) {
    out.detail = "src is not classifiable against the ambient universe";
    return out;
  }
  out.src_amb = *srcfib;
  IdFactor e_id = amb.id_of(out.src_amb);
  SdrReport rep = sdr_check(c, amb.um, e_id, h.src, h.trv,
                            mode == UAMode::Pointed ? TransferMode::Pointed
                                                    : TransferMode::LowerHalf,
                            amb.oracle());
  out.search_space = rep.search_space;
  if (!rep.pass) {
    out.kind = UAVerdict::Refuted;
    out.detail = rep.detail;
    return out;
  }
  out.kind = UAVerdict::Structure;
  out.homotopy = rep.homotopy;
  out.lift = rep.lift;
  out.detail = "homotopy found; structure transferred";
  return out;
}

// ---------------------------------------------------------------------------
// type-theoretic forms

TTUAData ua_to_tt(Itt& amb, Itt& inner, const HIsoData& h, const UAVerdict& ua) {
  Backend& c = *amb.C;
  if (ua.kind != UAVerdict::Structure || !ua.lift)
    throw std::runtime_error("ua_to_tt: no univalence structure");
  TTUAData tt;
  tt.pointed = ua.lift->full;
  tt.srctgt_amb = ua.srctgt_amb;
  Obj u0 = inner.um.u;
  auto u0fib = amb.um.classify(c.bang(u0));
  if (!u0fib) throw std::runtime_error("ua_to_tt: U0 not ambient-classifiable");
  tt.id_u0 = amb.id_of(*u0fib);
  tt.id_hiso = amb.id_of(ua.srctgt_amb);

  // J : Id(U0) -> HIso by solving the refl structure against (src,tgt)
  Mor one_id = c.identity(c.terminal());
  tt.j = tt.id_u0.refl_lift.solve({one_id, ua.srctgt_amb, h.trv, tt.id_u0.evd});

  // s = r : HIso -> Id(U0) by solving the univalence structure; the structure
  // from the SDF transfer is anchored over U0 by src, so the global problem
  // is its instance at the identity
  Mor idu0 = c.identity(u0);
  tt.s = ua.lift->solve({idu0, tt.id_u0.evd_fib, tt.id_u0.refl, h.srctgt});
  tt.r = tt.s;

  // H_s : J.s ~ id on HIso, constant along trv in pointed mode
  {
    Mor v = c.pb_induced(h.srctgt, h.srctgt, c.compose(tt.j, tt.s), c.identity(h.hiso));
    Mor u = c.compose(tt.id_hiso.refl, h.trv);
    tt.h_s = ua.lift->solve({idu0, tt.id_hiso.evd_fib, u, v});
  }
  // H_r : s.J ~ id on Id(U0), constant along refl
  {
    IdFactor idid = amb.id_of(tt.id_u0.evd_fib);
    Mor v = c.pb_induced(tt.id_u0.evd, tt.id_u0.evd, c.compose(tt.s, tt.j),
                         c.identity(tt.id_u0.idobj));
    Mor u = c.compose(idid.refl, tt.id_u0.refl);
    tt.h_r = tt.id_u0.refl_lift.solve({one_id, idid.evd_fib, u, v});
  }
  return tt;
}

LeftLift tt_to_ua(Itt& amb, Itt& inner, const HIsoData& h, const TTUAData& tt, UAMode mode) {
  Backend& c = *amb.C;
  Obj u0 = inner.um.u;
  if (mode == UAMode::Pointed && !tt.pointed)
    throw std::runtime_error("tt_to_ua: pointed mode requires constancy flags");
  Mor diag_u = c.pb_induced(c.bang(u0), c.bang(u0), c.identity(u0), c.identity(u0));
  RetractData d;
  d.i = h.trv;
  d.j = tt.id_u0.refl;
  d.s = tt.s;
  d.r = tt.j;
  d.h = tt.h_s;
  d.base = c.cod(h.srctgt);
  d.u_anchor = diag_u;
  d.e_anchor = h.srctgt;
  d.eprime_anchor = tt.id_u0.evd;
  d.e_id = tt.id_hiso;
  // refl of U0, anchored over U0 x U0 by the boundary evaluation
  LeftLift lsj = iso_left_lift(c, amb.um, tt.id_u0.refl, d.base, diag_u,
                               tt.id_u0.evd, tt.id_u0.ev0);
  return retract_transfer(d, lsj,
                          mode == UAMode::Pointed ? TransferMode::Pointed
                                                  : TransferMode::LowerHalf,
                          amb.oracle());
}

// ---------------------------------------------------------------------------
// pointed functional extensionality

PointedFunext build_pointed_funext(Itt& itt) {
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  if (!itt.id) throw std::runtime_error("build_pointed_funext: no Id structure");
  const IdFactor& gen = itt.id->generic;
  PointedFunext out;
  Backend::Prod exe = c.product(um.tu, um.tu);
  Backend::Prod exid = c.product(um.tu, gen.idobj);
  Backend::Pf tu_pf = itt.exe_pf0;
  Backend::Pf id_pf = c.pushforward(um.pi, exid.p1);
  Mor turefl = c.pb_induced(c.bang(um.tu), c.bang(gen.idobj), exe.p1,
                            c.compose(gen.refl, exe.p2));
  out.poly_refl = pf_map(c, tu_pf, id_pf, turefl);
  Mor tuev0 = c.pb_induced(c.bang(um.tu), c.bang(um.tu), exid.p1,
                           c.compose(gen.ev0, exid.p2));
  Mor inv = pf_map(c, id_pf, tu_pf, tuev0);
  out.poly_tu = tu_pf.total;
  out.poly_id = id_pf.total;
  out.base = iso_left_lift(c, um, out.poly_refl, um.u, tu_pf.proj, id_pf.proj, inv);
  return out;
}

FunextComparison funext_comparison(Itt& itt, const Fibrancy& q, const Fibrancy& e) {
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  FunextComparison cmp;
  cmp.id_b = itt.id_of(e);
  Fibrancy exe_b = itt.compose_fib(e, itt.rebase(e, e.p));
  Fibrancy idb_over_b = itt.compose_fib(exe_b, cmp.id_b.evd_fib);
  cmp.q_e = itt.push_name(q, e);
  cmp.q_id = itt.push_name(q, idb_over_b);
  cmp.id_a = itt.id_of(cmp.q_e);
  cmp.q = q.p;
  cmp.qe_pf = c.pushforward(q.p, e.p);
  cmp.qid_pf = c.pushforward(q.p, idb_over_b.p);
  Backend::Pf qe_pf = cmp.qe_pf;
  Backend::Pf qid_pf = cmp.qid_pf;
  cmp.m0 = pf_map(c, qid_pf, qe_pf, cmp.id_b.ev0);
  cmp.m1 = pf_map(c, qid_pf, qe_pf, cmp.id_b.ev1);
  Mor exe_leg = c.pb_induced(cmp.q_e.p, cmp.q_e.p, cmp.m0, cmp.m1);
  Mor val_leg = c.compose(itt.id->pre.refl_name, c.compose(cmp.q_e.point, cmp.m0));
  cmp.phi = c.pb_induced(um.pi, cmp.id_a.evd_fib.name, val_leg, exe_leg);
  return cmp;
}

FunextTT funext_tt_maps(Itt& itt, const FunextComparison& cmp) {
  Backend& c = *itt.C;
  FunextTT out;
  out.s = cmp.phi;
  // r : Id_A(q_* E) -> q_*(Id_B E), the canonical inverse: evaluate the
  // first endpoint table and wrap every value in refl
  Backend::Pb pbq = c.pullback(cmp.id_a.id_anchor, cmp.q);
  Mor mu = c.pb_induced(cmp.qe_pf.proj, cmp.q, c.compose(cmp.id_a.ev0, pbq.to_f),
                        pbq.to_g);
  Mor f0 = c.compose(cmp.qe_pf.counit, mu);
  Mor f = c.compose(cmp.id_b.refl, f0);
  out.r = c.pf_transpose(cmp.qid_pf, cmp.id_a.id_anchor, f);
  // exactness: s . q_*(refl) = refl on the pushforward
  Mor qrefl = pf_map(c, cmp.qe_pf, cmp.qid_pf, cmp.id_b.refl);
  out.s_exact = c.enumerable(c.dom(cmp.q_e.p))
                    ? c.equal_on_points(c.compose(cmp.phi, qrefl), cmp.id_a.refl)
                    : true;
  return out;
}

LeftLift ptdfunext_family(Itt& itt, const PointedFunext& pf, const Fibrancy& q,
                          const Fibrancy& y, const Fibrancy& e, Mor s,
                          const LeftLift& ls_s) {
  Backend& c = *itt.C;
  (void)pf;
  Obj b = c.dom(q.p);
  // 1. the retraction of s: extend the identity along s
  Mor r = ls_s.solve({c.identity(b), y, c.identity(c.dom(y.p)), e.p});
  // 2. the homotopy s.r ~ id constant along s
  IdFactor idb = itt.id_of(e);
  Mor v = c.pb_induced(e.p, e.p, c.compose(s, r), c.identity(c.dom(e.p)));
  Mor hh = ls_s.solve({c.identity(b), idb.evd_fib, c.compose(idb.refl, s), v});
  // 3. push the data forward and compare through phi
  FunextComparison cmp = funext_comparison(itt, q, e);
  Backend::Pf qe_pf = cmp.qe_pf;
  Backend::Pf qy_pf = c.pushforward(q.p, y.p);
  Backend::Pf qid_pf = cmp.qid_pf;
  Mor qs = pf_map(c, qy_pf, qe_pf, s);
  Mor qr = pf_map(c, qe_pf, qy_pf, r);
  Mor qh = pf_map(c, qe_pf, qid_pf, hh);
  Mor hprime = c.compose(cmp.phi, qh);
  // 4. dual-SDR assembly for q_* s
  Fibrancy qy = itt.push_name(q, y);
  RetractData d;
  d.i = qs;
  d.j = c.identity(qy_pf.total);
  d.s = qr;
  d.r = qs;
  d.h = hprime;
  d.base = c.cod(q.p);
  d.u_anchor = qy.p;
  d.e_anchor = cmp.q_e.p;
  d.eprime_anchor = qy.p;
  d.e_id = cmp.id_a;
  LeftLift lsj = iso_left_lift(c, *ls_s.um, c.identity(qy_pf.total), d.base, qy.p, qy.p,
                               c.identity(qy_pf.total));
  return retract_transfer(d, lsj, TransferMode::Pointed, itt.oracle());
}

}  // namespace ucat
