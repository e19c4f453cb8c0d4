#include "ucat/lifting.hpp"

namespace ucat {

Mor cylinder_map(Backend& c, Mor x_anchor, Mor m, Mor a_anchor, Mor b_anchor) {
  Backend::Pb pa = c.pullback(a_anchor, x_anchor);
  return c.pb_induced(b_anchor, x_anchor, c.compose(m, pa.to_f), pa.to_g);
}

Mor LeftLift::cyl_i(Mor x_anchor) const {
  return cylinder_map(*C, x_anchor, i, k_anchor, l_anchor);
}

Mor LeftLift::solve(const LiftInstance& inst) const {
  Backend::Pb ck = cyl_k(inst.x_anchor);
  Backend::Pb cl = cyl_l(inst.x_anchor);
  if (C->dom(inst.u) != ck.apex || C->dom(inst.v) != cl.apex)
    throw std::runtime_error("LeftLift::solve: problem domains do not match the cylinders");
  if (C->cod(inst.u) != C->dom(inst.target.p) || C->cod(inst.v) != C->cod(inst.target.p))
    throw std::runtime_error("LeftLift::solve: problem codomains do not match the target");
  Mor ci = cyl_i(inst.x_anchor);
  if (C->enumerable(ck.apex)) {
    if (!C->equal_on_points(C->compose(inst.target.p, inst.u), C->compose(inst.v, ci)))
      throw std::runtime_error("LeftLift::solve: problem square does not commute");
  }
  Mor filler = solver(inst);
  if (C->enumerable(cl.apex)) {
    if (!C->equal_on_points(C->compose(inst.target.p, filler), inst.v))
      throw std::runtime_error("LeftLift::solve: lower triangle violated");
    if (full && !C->equal_on_points(C->compose(filler, ci), inst.u))
      throw std::runtime_error("LeftLift::solve: upper triangle violated");
  }
  return filler;
}

LeftLift iso_left_lift(Backend& c, const UniversalMap& um, Mor i, Obj s, Mor k_anchor,
                       Mor l_anchor, Mor i_inv, bool full) {
  if (c.enumerable(c.dom(i))) {
    for (Mor pt : c.points(c.dom(i)))
      if (c.compose(i_inv, c.compose(i, pt)) != pt)
        throw std::runtime_error("iso_left_lift: supplied inverse is not a retraction");
  }
  if (c.enumerable(c.cod(i))) {
    for (Mor pt : c.points(c.cod(i)))
      if (c.compose(i, c.compose(i_inv, pt)) != pt)
        throw std::runtime_error("iso_left_lift: supplied inverse is not a section");
  }
  LeftLift ls;
  ls.C = &c;
  ls.um = &um;
  ls.i = i;
  ls.s = s;
  ls.k_anchor = k_anchor;
  ls.l_anchor = l_anchor;
  ls.full = full;
  ls.iso_inverse = i_inv;
  Backend* cp = &c;
  ls.solver = [cp, i_inv, k_anchor, l_anchor](const LiftInstance& inst) {
    Backend::Pb cl = cp->pullback(l_anchor, inst.x_anchor);
    Mor m = cp->pb_induced(k_anchor, inst.x_anchor, cp->compose(i_inv, cl.to_f), cl.to_g);
    return cp->compose(inst.u, m);
  };
  return ls;
}

LeftLift compose_left(const LeftLift& a, const LeftLift& b) {
  if (a.C != b.C || a.l_anchor != b.k_anchor)
    throw std::runtime_error("compose_left: structures do not share the middle anchor");
  LeftLift ls;
  ls.C = a.C;
  ls.um = a.um;
  ls.i = a.C->compose(b.i, a.i);
  ls.s = a.s;
  ls.k_anchor = a.k_anchor;
  ls.l_anchor = b.l_anchor;
  ls.full = a.full && b.full;
  LeftLift acopy = a, bcopy = b;
  ls.solver = [acopy, bcopy](const LiftInstance& inst) {
    Backend& cc = *acopy.C;
    Mor cj = cylinder_map(cc, inst.x_anchor, bcopy.i, bcopy.k_anchor, bcopy.l_anchor);
    Mor fl = acopy.solve({inst.x_anchor, inst.target, inst.u, cc.compose(inst.v, cj)});
    return bcopy.solve({inst.x_anchor, inst.target, fl, inst.v});
  };
  return ls;
}

LeftLift as_lower_half(const LeftLift& ls) {
  LeftLift out = ls;
  out.full = false;
  return out;
}

LeftLift rebase_left(const LeftLift& ls, Mor x, Mor new_i, Mor new_k_anchor,
                     Mor new_l_anchor) {
  LeftLift out;
  out.C = ls.C;
  out.um = ls.um;
  out.i = new_i;
  out.s = ls.C->dom(x);
  out.k_anchor = new_k_anchor;
  out.l_anchor = new_l_anchor;
  out.full = ls.full;
  LeftLift basec = ls;
  out.solver = [basec, x](const LiftInstance& inst) {
    Backend& cc = *basec.C;
    return basec.solve({cc.compose(x, inst.x_anchor), inst.target, inst.u, inst.v});
  };
  return out;
}

IdFactor rebase_id_factor(Backend& c, const UniversalMap& um, const IdFactor& idf, Mor x) {
  IdFactor out;
  out.base = c.dom(x);
  out.e_fib = um.rebase(idf.e_fib, x);
  Backend::Pb ce = c.pullback(idf.e_fib.p, x);
  Backend::Pb cexe = c.pullback(idf.exe_anchor, x);
  out.exe = c.pullback(out.e_fib.p, out.e_fib.p).apex;
  Backend::Pb pexe = c.pullback(out.e_fib.p, out.e_fib.p);
  out.pr0 = pexe.to_f;
  out.pr1 = pexe.to_g;
  out.exe_anchor = c.compose(out.e_fib.p, pexe.to_f);
  out.diag = c.pb_induced(out.e_fib.p, out.e_fib.p, c.identity(ce.apex), c.identity(ce.apex));
  // cylindered Id object: the rebase of evd along the exe-cylinder, mediated
  // to the local exe
  Mor exe_cyl_to_local = c.pb_induced(
      out.e_fib.p, out.e_fib.p,
      c.pb_induced(idf.e_fib.p, x, c.compose(idf.pr0, cexe.to_f), cexe.to_g),
      c.pb_induced(idf.e_fib.p, x, c.compose(idf.pr1, cexe.to_f), cexe.to_g));
  Mor local_to_exe_cyl = c.pb_induced(
      idf.exe_anchor, x,
      c.pb_induced(idf.e_fib.p, idf.e_fib.p, c.compose(ce.to_f, out.pr0),
                   c.compose(ce.to_f, out.pr1)),
      c.compose(out.e_fib.p, out.pr0));
  Backend::Pb cid = c.pullback(idf.evd, c.compose(cexe.to_f, local_to_exe_cyl));
  out.idobj = cid.apex;
  out.evd = cid.to_g;
  out.evd_fib = Fibrancy{cid.to_g, c.compose(idf.evd_fib.name,
                                             c.compose(cexe.to_f, local_to_exe_cyl)),
                         c.compose(idf.evd_fib.point, cid.to_f)};
  out.ev0 = c.compose(out.pr0, out.evd);
  out.ev1 = c.compose(out.pr1, out.evd);
  out.id_anchor = c.compose(out.exe_anchor, out.evd);
  // refl on the cylinder, mediated into the local Id object
  Mor refl_cyl = c.pb_induced(idf.evd, c.compose(cexe.to_f, local_to_exe_cyl),
                              c.compose(idf.refl, ce.to_f), out.diag);
  out.refl = refl_cyl;
  if (idf.refl_lift.iso_inverse != kNone)
    out.refl_lift = iso_left_lift(c, um, out.refl, out.base, out.e_fib.p, out.id_anchor,
                                  out.ev0, idf.refl_lift.full);
  else
    out.refl_lift = rebase_left(idf.refl_lift, x, out.refl, out.e_fib.p, out.id_anchor);
  (void)exe_cyl_to_local;
  return out;
}

LeftLift transfer_pullback(const LeftLift& ls, const Fibrancy& w, const LiftOracle& oracle) {
  Backend& c = *ls.C;
  if (c.cod(w.p) != c.dom(ls.l_anchor))
    throw std::runtime_error("transfer_pullback: fibration does not land in L");
  Backend::Pb pbv = c.pullback(ls.i, w.p);  // V: to_f -> K, to_g -> W
  LeftLift out;
  out.C = ls.C;
  out.um = ls.um;
  out.i = pbv.to_g;  // V -> W ... placeholder, fixed below
  out.s = ls.s;
  Mor w_anchor = c.compose(ls.l_anchor, w.p);
  out.k_anchor = c.compose(w_anchor, pbv.to_g);
  out.l_anchor = w_anchor;
  out.full = ls.full;
  out.i = pbv.to_g;
  LeftLift base = ls;
  Fibrancy wf = w;
  Backend::Pb pbv_c = pbv;
  LiftOracle orc = oracle;
  out.solver = [base, wf, pbv_c, orc, w_anchor](const LiftInstance& inst) {
    Backend& cc = *base.C;
    Mor x = inst.x_anchor;
    Mor v_anchor = cc.compose(w_anchor, pbv_c.to_g);
    Backend::Pb cW = cc.pullback(w_anchor, x);
    Backend::Pb cL = cc.pullback(base.l_anchor, x);
    Backend::Pb cK = cc.pullback(base.k_anchor, x);
    if (!cc.enumerable(cW.apex))
      throw std::runtime_error("transfer_pullback: lazy cylinders not supported");
    // cylindered fibration q : X x W -> X x L
    Mor qmap = cylinder_map(cc, x, wf.p, w_anchor, base.l_anchor);
    Fibrancy qfib{qmap, cc.compose(wf.name, cL.to_f), cc.compose(wf.point, cW.to_f)};
    // the target pulled back along v, named over X x W
    Backend::Pb vP = cc.pullback(inst.target.p, inst.v);
    Fibrancy vfib{vP.to_g, cc.compose(inst.target.name, inst.v),
                  cc.compose(inst.target.point, vP.to_f)};
    // partial section over X x V
    Mor cj = cylinder_map(cc, x, pbv_c.to_g, v_anchor, w_anchor);
    Mor sigma = cc.pb_induced(inst.target.p, inst.v, inst.u, cj);
    // push forward along q, transpose the section
    Backend::Pf pf = cc.pushforward(qmap, vP.to_g);
    Fibrancy pifib = orc.push_name(qfib, vfib);
    if (pifib.p != pf.proj)
      throw std::runtime_error("transfer_pullback: push_name disagrees with the pushforward");
    Mor ci = cylinder_map(cc, x, base.i, base.k_anchor, base.l_anchor);
    Backend::Pb mixed = cc.pullback(ci, qmap);
    Mor mixed_to_v = cc.pb_induced(
        v_anchor, x,
        cc.pb_induced(base.i, wf.p, cc.compose(cK.to_f, mixed.to_f),
                      cc.compose(cW.to_f, mixed.to_g)),
        cc.compose(cK.to_g, mixed.to_f));
    Mor f = cc.compose(sigma, mixed_to_v);
    Mor tau = cc.pf_transpose(pf, ci, f);
    Mor fl = base.solve({x, pifib, tau, cc.identity(cL.apex)});
    Mor rho = cc.pb_induced(cc.identity(cL.apex), qmap, qmap, cc.identity(cW.apex));
    Mor fw = cc.compose(cc.pf_untranspose(pf, cc.identity(cL.apex), fl), rho);
    return cc.compose(vP.to_f, fw);
  };
  return out;
}

LeftLift retract_transfer(const RetractData& data, const LeftLift& ls_j, TransferMode mode,
                          const LiftOracle& oracle) {
  LeftLift out;
  out.C = ls_j.C;
  out.um = ls_j.um;
  out.i = data.i;
  out.s = data.base;
  out.k_anchor = data.u_anchor;
  out.l_anchor = data.e_anchor;
  out.full = (mode == TransferMode::Pointed);
  RetractData d = data;
  LeftLift lsj = ls_j;
  LiftOracle orc = oracle;
  out.solver = [d, lsj, orc](const LiftInstance& inst) {
    Backend& cc = *lsj.C;
    const UniversalMap& um = *lsj.um;
    Mor x = inst.x_anchor;
    Backend::Pb cEp = cc.pullback(d.eprime_anchor, x);
    Mor ci = cylinder_map(cc, x, d.i, d.u_anchor, d.e_anchor);
    Mor cj = cylinder_map(cc, x, d.j, d.u_anchor, d.eprime_anchor);
    Mor cs = cylinder_map(cc, x, d.s, d.e_anchor, d.eprime_anchor);
    Mor cr = cylinder_map(cc, x, d.r, d.eprime_anchor, d.e_anchor);
    // target pulled back along v: a named fibration over X x E
    Backend::Pb vE = cc.pullback(inst.target.p, inst.v);
    Fibrancy vfib{vE.to_g, cc.compose(inst.target.name, inst.v),
                  cc.compose(inst.target.point, vE.to_f)};
    Mor sigma = cc.pb_induced(inst.target.p, inst.v, inst.u, ci);
    // step 1: rebase along the cylinder of r
    Backend::Pb rP = cc.pullback(vE.to_g, cr);
    Fibrancy rfib{rP.to_g, cc.compose(vfib.name, cr), cc.compose(vfib.point, rP.to_f)};
    // step 2: extend the section along j
    Mor uj = cc.pb_induced(vE.to_g, cr, sigma, cj);
    Mor xprime = lsj.solve({x, rfib, uj, cc.identity(cEp.apex)});
    // step 3: restrict along the cylinder of s; the result sits over cyl(r.s)
    Mor sx = cc.compose(cc.compose(rP.to_f, xprime), cs);
    // step 4: the transport adjustment along the cylinder of the homotopy
    IdFactor idf_cyl = rebase_id_factor(cc, um, d.e_id, x);
    Backend::Pb cE = cc.pullback(d.e_anchor, x);
    Backend::Pb cexe = cc.pullback(d.e_id.exe_anchor, x);
    Mor local_to_exe_cyl = cc.pb_induced(
        d.e_id.exe_anchor, x,
        cc.pb_induced(d.e_id.e_fib.p, d.e_id.e_fib.p,
                      cc.compose(cE.to_f, idf_cyl.pr0), cc.compose(cE.to_f, idf_cyl.pr1)),
        cc.compose(idf_cyl.e_fib.p, idf_cyl.pr0));
    // <r.s, id> on the cylinder, into the local exe
    Mor rs_cyl = cc.pb_induced(idf_cyl.e_fib.p, idf_cyl.e_fib.p,
                               cc.compose(cr, cs), cc.identity(cE.apex));
    Mor htilde = cc.pb_induced(d.e_id.evd, cc.compose(cexe.to_f, local_to_exe_cyl),
                               cc.compose(d.h, cE.to_f), rs_cyl);
    Mor xbar = orc.transport_along(vfib, idf_cyl, htilde, sx);
    return cc.compose(vE.to_f, xbar);
  };
  return out;
}

SdrReport sdr_check(Backend& c, const UniversalMap& um, const IdFactor& e_id, Mor f, Mor g,
                    TransferMode mode, const LiftOracle& oracle) {
  SdrReport rep;
  Obj e = c.dom(f), y = c.cod(f);
  if (c.dom(g) != y || c.cod(g) != e) {
    rep.detail = "g is not a candidate section of f";
    return rep;
  }
  if (!c.equal_on_points(c.compose(f, g), c.identity(y))) {
    rep.detail = "fg != id: not a precise section-retraction pair";
    return rep;
  }
  if (!c.enumerable(e)) {
    rep.detail = "E not enumerable; homotopy search unavailable";
    return rep;
  }
  Mor gf = c.compose(g, f);
  std::vector<Mor> images;
  std::vector<Mor> epts = c.points(e);
  std::vector<std::pair<Mor, Mor>> pins;
  if (mode == TransferMode::Pointed && c.enumerable(y))
    for (Mor ypt : c.points(y))
      pins.emplace_back(c.compose(g, ypt), c.compose(e_id.refl, c.compose(g, ypt)));
  for (Mor ept : epts) {
    Mor target_pt = c.pb_induced(e_id.e_fib.p, e_id.e_fib.p, c.compose(gf, ept), ept);
    auto fib = c.fiber_points(e_id.evd, target_pt);
    if (!fib) {
      rep.detail = "evd fibers not enumerable";
      return rep;
    }
    rep.search_space += fib->size();
    Mor pinned = kNone;
    for (auto& [at, val] : pins)
      if (at == ept) pinned = val;
    Mor chosen = kNone;
    for (Mor cand : *fib) {
      if (pinned != kNone && cand != pinned) continue;
      chosen = cand;
      break;
    }
    if (chosen == kNone) {
      rep.detail = "no homotopy value over " + c.show_mor(ept) +
                   (pinned != kNone ? " (constancy pin unsatisfiable)" : " (empty fiber)");
      return rep;
    }
    images.push_back(chosen);
  }
  Mor h = kNone;
  if (c.points_determine_morphisms()) {
    h = c.mor_from_point_images(e, e_id.idobj, images);
  } else {
    // search the hom-set for a map matching the required conditions
    Mor want = kNone;
    for (Mor cand : c.hom(e, e_id.idobj)) {
      bool ok = true;
      for (size_t i = 0; i < epts.size(); ++i)
        if (c.compose(cand, epts[i]) != images[i]) {
          ok = false;
          break;
        }
      if (ok) {
        want = cand;
        break;
      }
    }
    if (want == kNone) {
      // fall back: any hom satisfying the squares pointwise
      for (Mor cand : c.hom(e, e_id.idobj)) {
        bool ok = true;
        for (Mor ept : epts) {
          Mor target_pt = c.pb_induced(e_id.e_fib.p, e_id.e_fib.p,
                                       c.compose(gf, ept), ept);
          if (c.compose(e_id.evd, c.compose(cand, ept)) != target_pt) {
            ok = false;
            break;
          }
        }
        if (ok) {
          bool pinfail = false;
          for (auto& [at, val] : pins)
            if (c.compose(cand, at) != val) pinfail = true;
          if (!pinfail) {
            want = cand;
            break;
          }
        }
        ++rep.search_space;
      }
    }
    if (want == kNone) {
      rep.detail = "no homotopy in the hom-set satisfies the conditions";
      return rep;
    }
    h = want;
  }
  rep.homotopy = h;
  rep.pass = true;
  RetractData data;
  data.i = g;
  data.j = c.identity(y);
  data.s = f;
  data.r = g;
  data.h = h;
  data.base = e_id.base;
  data.u_anchor = c.compose(e_id.e_fib.p, g);
  data.e_anchor = e_id.e_fib.p;
  data.eprime_anchor = data.u_anchor;
  data.e_id = e_id;
  LeftLift idlift = iso_left_lift(c, um, c.identity(y), e_id.base, data.u_anchor,
                                  data.u_anchor, c.identity(y));
  rep.lift = retract_transfer(data, idlift, mode, oracle);
  return rep;
}

FillerSearch brute_force_filler(Backend& c, const LeftLift& shape, const LiftInstance& inst,
                                bool lower_half_only) {
  FillerSearch out;
  Backend::Pb ck = c.pullback(shape.k_anchor, inst.x_anchor);
  Backend::Pb cl = c.pullback(shape.l_anchor, inst.x_anchor);
  if (!c.enumerable(ck.apex) || !c.enumerable(cl.apex))
    throw std::runtime_error("brute_force_filler: non-enumerable cylinders");
  Mor ci = shape.cyl_i(inst.x_anchor);
  std::vector<Mor> lpts = c.points(cl.apex);
  std::vector<Mor> pinned(lpts.size(), kNone);
  if (!lower_half_only) {
    for (Mor kpt : c.points(ck.apex)) {
      Mor at = c.compose(ci, kpt);
      Mor val = c.compose(inst.u, kpt);
      for (size_t iidx = 0; iidx < lpts.size(); ++iidx)
        if (lpts[iidx] == at) {
          if (pinned[iidx] != kNone && pinned[iidx] != val) {
            out.witness = "conflicting upper-triangle pins";
            return out;
          }
          pinned[iidx] = val;
        }
    }
  }
  std::vector<Mor> images;
  for (size_t iidx = 0; iidx < lpts.size(); ++iidx) {
    auto fib = c.fiber_points(inst.target.p, c.compose(inst.v, lpts[iidx]));
    if (!fib) throw std::runtime_error("brute_force_filler: target has no fibers");
    out.space += fib->size();
    Mor chosen = kNone;
    for (Mor cand : *fib) {
      if (pinned[iidx] != kNone && cand != pinned[iidx]) continue;
      chosen = cand;
      break;
    }
    if (chosen == kNone) {
      out.witness = "no candidate over point " + std::to_string(iidx) +
                    (pinned[iidx] != kNone ? " (pin not in fiber)" : " (empty fiber)");
      return out;
    }
    images.push_back(chosen);
  }
  if (c.points_determine_morphisms()) {
    out.filler = c.mor_from_point_images(cl.apex, c.dom(inst.target.p), images);
    return out;
  }
  // hom-enumeration fallback for backends whose morphisms are not recovered
  // from point images
  for (Mor cand : c.hom(cl.apex, c.dom(inst.target.p))) {
    ++out.space;
    if (!c.equal_on_points(c.compose(inst.target.p, cand), inst.v)) continue;
    if (!lower_half_only && !c.equal_on_points(c.compose(cand, ci), inst.u)) continue;
    out.filler = cand;
    return out;
  }
  out.witness = "no filler in the hom-set";
  return out;
}

bool verify_uniformity(const LeftLift& ls, const LiftInstance& inst,
                       const std::vector<Mor>& reindexings) {
  Backend& c = *ls.C;
  Mor base_filler = ls.solve(inst);
  for (Mor t : reindexings) {
    if (c.cod(t) != c.dom(inst.x_anchor)) return false;
    Mor x2 = c.compose(inst.x_anchor, t);
    Backend::Pb ck2 = c.pullback(ls.k_anchor, x2);
    Backend::Pb cl2 = c.pullback(ls.l_anchor, x2);
    Mor tk = c.pb_induced(ls.k_anchor, inst.x_anchor, ck2.to_f, c.compose(t, ck2.to_g));
    Mor tl = c.pb_induced(ls.l_anchor, inst.x_anchor, cl2.to_f, c.compose(t, cl2.to_g));
    LiftInstance inst2{x2, inst.target, c.compose(inst.u, tk), c.compose(inst.v, tl)};
    Mor f2 = ls.solve(inst2);
    if (!c.equal_on_points(f2, c.compose(base_filler, tl))) return false;
  }
  return true;
}

}  // namespace ucat
