#include "ucat/hiso.hpp"

#include <map>

namespace ucat {

namespace {

// hom-object pushforward matching the hom_fib orientation:
// [A, B]_S = pushforward(a.p, pullback(b.p, a.p).to_g)
Backend::Pf hom_pf(Backend& c, const Fibrancy& a, const Fibrancy& b) {
  Backend::Pb prod = c.pullback(b.p, a.p);
  return c.pushforward(a.p, prod.to_g);
}

}  // namespace

HIsoData build_hiso(Itt& itt) {
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  if (!itt.id) throw std::runtime_error("build_hiso: no pre-Id structure");
  if (!itt.gc0 || itt.poly_map0 == kNone)
    throw std::runtime_error("build_hiso: missing generic-composite data");
  const PreIdStructure& pre = itt.id->pre;
  const GenCompData& gc = *itt.gc0;
  HIsoData h;

  Fibrancy pifib{um.pi, c.identity(um.u), c.identity(um.tu)};
  h.uxu = c.product(um.u, um.u);
  h.pixu = um.rebase(pifib, h.uxu.p1);
  h.uxpi = um.rebase(pifib, h.uxu.p2);
  h.homab_pf = hom_pf(c, h.pixu, h.uxpi);
  h.homba_pf = hom_pf(c, h.uxpi, h.pixu);
  // endo = [tU, tU]_U = pi_*(tU xU tU)
  Fibrancy tt_fib = um.rebase(pifib, um.pi);
  h.endo_pf = c.pushforward(um.pi, tt_fib.p);

  // g : endo -> bot, pushing (e, b) |-> (e, Id(e, b))
  Backend::Pb tt = c.pullback(um.pi, um.pi);
  Mor hmap = c.pb_induced(c.bang(um.tu), c.bang(um.u), tt.to_g, pre.id_map);
  h.g = pf_map(c, h.endo_pf, gc.bot_pf, hmap);

  // HId = pullback of the polynomial map along g
  Backend::Pb hidpb = c.pullback(itt.poly_map0, h.g);
  h.hid = hidpb.apex;
  h.hid_to_endo = hidpb.to_g;

  // composable pairs
  Backend::Pb cppb = c.pullback(h.homba_pf.proj, h.homab_pf.proj);
  h.cp = cppb.apex;
  h.cp_s = cppb.to_f;
  h.cp_f = cppb.to_g;

  // the two internal composition maps CP -> endo, built by transposition
  Backend::Pb prod_ab = c.pullback(h.uxpi.p, h.pixu.p);  // to_f -> UxtU, to_g -> tUxU
  Backend::Pb prod_ba = c.pullback(h.pixu.p, h.uxpi.p);
  Backend::Pb pb_pixu = c.pullback(um.pi, h.uxu.p1);
  Backend::Pb pb_uxpi = c.pullback(um.pi, h.uxu.p2);
  auto comp_map = [&](bool at_a) {
    Mor first_hom = at_a ? h.cp_f : h.cp_s;    // evaluate this one first
    Mor second_hom = at_a ? h.cp_s : h.cp_f;
    const Backend::Pf& first_pf = at_a ? h.homab_pf : h.homba_pf;
    const Backend::Pf& second_pf = at_a ? h.homba_pf : h.homab_pf;
    const Fibrancy& first_dom = at_a ? h.pixu : h.uxpi;    // where e lives
    const Fibrancy& first_codv = at_a ? h.uxpi : h.pixu;   // where f(e) lives
    Mor coord = at_a ? h.uxu.p1 : h.uxu.p2;
    Mor other_coord = at_a ? h.uxu.p2 : h.uxu.p1;
    Mor y = c.compose(coord, c.compose(h.homab_pf.proj, h.cp_f));
    Backend::Pb q = c.pullback(y, um.pi);  // to_f -> CP, to_g -> tU
    Mor e_tu = q.to_g;
    Mor uxu_leg = c.compose(h.homab_pf.proj, c.compose(h.cp_f, q.to_f));
    // e as an element of the first hom's key object
    Mor e_key = c.pb_induced(um.pi, at_a ? h.uxu.p1 : h.uxu.p2, e_tu, uxu_leg);
    // evaluate the first table
    Mor mu1 = c.pb_induced(first_pf.proj, first_dom.p,
                           c.compose(first_hom, q.to_f), e_key);
    Mor v1 = c.compose(first_pf.counit, mu1);
    Mor fe = c.compose(at_a ? prod_ab.to_f : prod_ba.to_f, v1);  // value elem

    // evaluate the second table at the value
    Mor mu2 = c.pb_induced(second_pf.proj, first_codv.p,
                           c.compose(second_hom, q.to_f), fe);
    Mor v2 = c.compose(second_pf.counit, mu2);
    Mor sfe = c.compose(at_a ? prod_ba.to_f : prod_ab.to_f, v2);
    Mor sfe_tu = c.compose(at_a ? pb_pixu.to_f : pb_uxpi.to_f, sfe);
    // endo tables pair the key element (to_g side) with the value (to_f side)
    Mor f = c.pb_induced(um.pi, um.pi, sfe_tu, e_tu);
    (void)other_coord;
    return c.pf_transpose(h.endo_pf, y, f);
  };
  h.comp_at_a = comp_map(true);
  h.comp_at_b = comp_map(false);

  // rebase-oriented chain
  Backend::Pb rhpb = c.pullback(h.hid_to_endo, h.comp_at_a);
  h.rhinv = rhpb.apex;
  h.rh_p = rhpb.to_g;
  Backend::Pb lhpb = c.pullback(h.hid_to_endo, h.comp_at_b);
  h.lhinv = lhpb.apex;
  h.lh_p = lhpb.to_g;
  Mor lh_to_hom = c.compose(h.cp_f, h.lh_p);
  Mor rh_to_hom = c.compose(h.cp_f, h.rh_p);
  Backend::Pb hisopb = c.pullback(lh_to_hom, rh_to_hom);
  h.hiso = hisopb.apex;
  h.hiso_to_lh = hisopb.to_f;
  h.hiso_to_rh = hisopb.to_g;
  h.hiso_to_hom = c.compose(rh_to_hom, h.hiso_to_rh);
  h.srctgt = c.compose(h.homab_pf.proj, h.hiso_to_hom);
  h.src = c.compose(h.uxu.p1, h.srctgt);
  h.tgt = c.compose(h.uxu.p2, h.srctgt);

  // trv : U -> HIso
  Mor idu = c.identity(um.u);
  Mor idtu = c.identity(um.tu);
  Mor diag_u = c.pb_induced(c.bang(um.u), c.bang(um.u), idu, idu);
  // identity elements of the two hom objects
  auto id_elem = [&](bool ab) {
    const Backend::Pf& pf = ab ? h.homab_pf : h.homba_pf;
    const Fibrancy& key_side = ab ? h.pixu : h.uxpi;
    Mor val_coord = ab ? h.uxu.p2 : h.uxu.p1;
    Backend::Pb q = c.pullback(diag_u, key_side.p);  // apex = tU by normalization
    Mor key_leg = q.to_g;
    Mor val_leg = c.pb_induced(um.pi, val_coord, idtu, c.compose(diag_u, um.pi));
    Mor fmor = ab ? c.pb_induced(h.uxpi.p, h.pixu.p, val_leg, key_leg)
                  : c.pb_induced(h.pixu.p, h.uxpi.p, val_leg, key_leg);
    return c.pf_transpose(pf, diag_u, fmor);
  };
  Mor idel_ab = id_elem(true);
  Mor idel_ba = id_elem(false);
  Mor trv_cp = c.pb_induced(h.homba_pf.proj, h.homab_pf.proj, idel_ba, idel_ab);
  // refl-tables
  Backend::Prod exe_prod = c.product(um.tu, um.tu);
  Mor f_refl = c.pb_induced(c.bang(um.tu), c.bang(um.tu), idtu, pre.refl_name);
  Mor u1 = c.pf_transpose(itt.exe_pf0, idu, f_refl);
  Mor u2 = c.pf_transpose(h.endo_pf, idu, pre.diag);
  Mor trv_hid = c.pb_induced(itt.poly_map0, h.g, u1, u2);
  Mor trv_rh = c.pb_induced(h.hid_to_endo, h.comp_at_a, trv_hid, trv_cp);
  Mor trv_lh = c.pb_induced(h.hid_to_endo, h.comp_at_b, trv_hid, trv_cp);
  h.trv = c.pb_induced(lh_to_hom, rh_to_hom, trv_lh, trv_rh);
  (void)exe_prod;
  return h;
}

EndpointFibrancy endpoint_fibrancy(Itt& itt, const HIsoData& h) {
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  itt.require_sigma();
  itt.require_pi();
  Fibrancy pifib{um.pi, c.identity(um.u), c.identity(um.tu)};
  Fibrancy homab_fib = itt.hom_fib(h.pixu, h.uxpi);
  Fibrancy homba_fib = itt.hom_fib(h.uxpi, h.pixu);
  if (homab_fib.p != h.homab_pf.proj || homba_fib.p != h.homba_pf.proj)
    throw std::runtime_error("endpoint_fibrancy: hom fibrancies do not match the chain");
  Fibrancy cp_fib = itt.rebase(homba_fib, homab_fib.p);
  Fibrancy hid_fib = itt.rebase(itt.pi->fib, h.g);
  if (cp_fib.p != h.cp_f || hid_fib.p != h.hid_to_endo)
    throw std::runtime_error("endpoint_fibrancy: chain mismatch");
  Fibrancy rh_fib = itt.rebase(hid_fib, h.comp_at_a);
  Fibrancy lh_fib = itt.rebase(hid_fib, h.comp_at_b);
  Fibrancy lh_hom = itt.compose_fib(cp_fib, lh_fib);
  Fibrancy rh_hom = itt.compose_fib(cp_fib, rh_fib);
  Fibrancy hiso_over_rh = itt.rebase(lh_hom, rh_hom.p);
  if (hiso_over_rh.p != h.hiso_to_rh)
    throw std::runtime_error("endpoint_fibrancy: HIso chain mismatch");
  Fibrancy hiso_hom = itt.compose_fib(rh_hom, hiso_over_rh);
  Fibrancy srctgt = itt.compose_fib(homab_fib, hiso_hom);
  (void)pifib;
  return EndpointFibrancy{srctgt, hiso_hom, homab_fib};
}

// ---------------------------------------------------------------------------
// representability

namespace {

struct TupleSide {
  Itt& itt;
  const HIsoData& h;
  Obj probe;
  Backend& c;
  const UniversalMap& um;

  // maps over the probe between two extensions
  std::vector<Mor> over_probe(const ExtData& a, const ExtData& b) {
    std::vector<Mor> out;
    for (Mor m : c.hom(a.obj, b.obj))
      if (c.equal_on_points(c.compose(b.proj, m), a.proj)) out.push_back(m);
    return out;
  }
  // homotopies H : dom -> IdObj(of fib) with evd.H = <lhs, id>
  std::vector<Mor> homotopies(const IdFactor& idf, Mor lhs) {
    std::vector<Mor> out;
    Obj e = c.dom(lhs);
    Mor want = c.pb_induced(idf.e_fib.p, idf.e_fib.p, lhs, c.identity(e));
    for (Mor m : c.hom(e, idf.idobj))
      if (c.equal_on_points(c.compose(idf.evd, m), want)) out.push_back(m);
    return out;
  }

  // encode an endomorphism table over a name
  Mor encode_endo(Mor name, const ExtData& ext, Mor t) {
    Mor f = c.pb_induced(um.pi, um.pi, c.compose(ext.var, t), ext.var);
    return c.pf_transpose(h.endo_pf, name, f);
  }
  // encode a homotopy table over a name
  Mor encode_homotopy(Mor name, const ExtData& ext, const IdFactor& idf, Mor hm) {
    Mor h_tu = c.compose(idf.evd_fib.point, hm);
    Mor f = c.pb_induced(c.bang(um.tu), c.bang(um.tu), ext.var, h_tu);
    return c.pf_transpose(itt.exe_pf0, name, f);
  }
  // encode a map between extensions as a hom-object element over (A, B)
  Mor encode_hom(bool ab, Mor pair_name, Mor a_name, Mor b_name, const ExtData& ea,
                 const ExtData& eb, Mor f) {
    const Backend::Pf& pf = ab ? h.homab_pf : h.homba_pf;
    const Fibrancy& key_side = ab ? h.pixu : h.uxpi;
    Mor key_coord = ab ? h.uxu.p1 : h.uxu.p2;
    Mor val_coord = ab ? h.uxu.p2 : h.uxu.p1;
    Backend::Pb q = c.pullback(pair_name, key_side.p);
    // q.apex is the extension along the key coordinate's name, i.e. ea
    Mor med = pullback_compare(c, pair_name, key_side.p, ea.proj,
                               c.pb_induced(um.pi, key_coord, ea.var,
                                            c.compose(pair_name, ea.proj)));
    // med : chosen apex -> ea.obj
    Mor val_leg = c.pb_induced(um.pi, val_coord, c.compose(eb.var, c.compose(f, med)),
                               c.compose(pair_name, c.compose(ea.proj, med)));
    Mor key_leg = c.pb_induced(um.pi, key_coord, c.compose(ea.var, med),
                               c.compose(pair_name, c.compose(ea.proj, med)));
    Mor fmor = ab ? c.pb_induced(h.uxpi.p, h.pixu.p, val_leg, key_leg)
                  : c.pb_induced(h.pixu.p, h.uxpi.p, val_leg, key_leg);
    (void)q;
    (void)a_name;
    (void)b_name;
    return c.pf_transpose(pf, pair_name, fmor);
  }
};

}  // namespace

RepReport representability_hid(Itt& itt, const HIsoData& h, Obj probe) {
  RepReport rep;
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  if (!c.enumerable(h.hid) || !c.enumerable(probe) || !c.enumerable(um.u)) {
    rep.detail = "non-enumerable data";
    return rep;
  }
  std::vector<Mor> hom_side = c.hom(probe, h.hid);
  rep.hom_count = hom_side.size();
  TupleSide ts{itt, h, probe, c, um};
  std::map<Mor, int> encoded;
  for (Mor a : c.hom(probe, um.u)) {
    ExtData ea = um.extend(a);
    IdFactor idf = itt.id_of(um.canonical_fib(a));
    for (Mor t : ts.over_probe(ea, ea)) {
      for (Mor hm : ts.homotopies(idf, t)) {
        ++rep.tuple_count;
        Mor endo_elem = ts.encode_endo(a, ea, t);
        Mor u1 = ts.encode_homotopy(a, ea, idf, hm);
        Mor enc = c.pb_induced(itt.poly_map0, h.g, u1, endo_elem);
        ++encoded[enc];
        // the structural projection commutes
        if (c.compose(h.hid_to_endo, enc) != endo_elem) {
          rep.detail = "projection does not commute";
          return rep;
        }
      }
    }
  }
  if (rep.tuple_count != rep.hom_count) {
    rep.detail = "counts differ: hom " + std::to_string(rep.hom_count) + " vs tuples " +
                 std::to_string(rep.tuple_count);
    return rep;
  }
  for (auto& [m, n] : encoded)
    if (n != 1) {
      rep.detail = "encoding not injective";
      return rep;
    }
  rep.pass = true;
  return rep;
}

namespace {

struct HisoTuples {
  // enumerate tuples (A, B, f, s, r, Hs, Hr) over the probe and encode them
  Itt& itt;
  const HIsoData& h;
  Obj probe;
  bool count_only;
  Mor fix_a = kNone, fix_b = kNone;  // optional restriction to fixed names

  RepReport run() {
    RepReport rep;
    Backend& c = *itt.C;
    const UniversalMap& um = itt.um;
    TupleSide ts{itt, h, probe, c, um};
    std::map<Mor, int> encoded;
    std::vector<Mor> names = c.hom(probe, um.u);
    for (Mor a : names) {
      if (fix_a != kNone && a != fix_a) continue;
      ExtData ea = um.extend(a);
      IdFactor ida = itt.id_of(um.canonical_fib(a));
      for (Mor b : names) {
        if (fix_b != kNone && b != fix_b) continue;
        ExtData eb = um.extend(b);
        IdFactor idb = itt.id_of(um.canonical_fib(b));
        Mor pair_name = c.pb_induced(c.bang(um.u), c.bang(um.u), a, b);
        for (Mor f : ts.over_probe(ea, eb)) {
          for (Mor s : ts.over_probe(eb, ea)) {
            std::vector<Mor> hss = ts.homotopies(ida, c.compose(s, f));
            if (hss.empty()) continue;
            for (Mor r : ts.over_probe(eb, ea)) {
              std::vector<Mor> hrs = ts.homotopies(idb, c.compose(f, r));
              for (Mor hs : hss) {
                for (Mor hr : hrs) {
                  ++rep.tuple_count;
                  if (count_only) continue;
                  Mor f_el = ts.encode_hom(true, pair_name, a, b, ea, eb, f);
                  Mor s_el = ts.encode_hom(false, pair_name, a, b, eb, ea, s);
                  Mor r_el = ts.encode_hom(false, pair_name, a, b, eb, ea, r);
                  Mor rh_cp = c.pb_induced(h.homba_pf.proj, h.homab_pf.proj, s_el, f_el);
                  Mor lh_cp = c.pb_induced(h.homba_pf.proj, h.homab_pf.proj, r_el, f_el);
                  Mor hs_endo = ts.encode_endo(a, ea, c.compose(s, f));
                  Mor hr_endo = ts.encode_endo(b, eb, c.compose(f, r));
                  Mor hs_exe = ts.encode_homotopy(a, ea, ida, hs);
                  Mor hr_exe = ts.encode_homotopy(b, eb, idb, hr);
                  Mor hs_hid = c.pb_induced(itt.poly_map0, h.g, hs_exe, hs_endo);
                  Mor hr_hid = c.pb_induced(itt.poly_map0, h.g, hr_exe, hr_endo);
                  Mor rh = c.pb_induced(h.hid_to_endo, h.comp_at_a, hs_hid, rh_cp);
                  Mor lh = c.pb_induced(h.hid_to_endo, h.comp_at_b, hr_hid, lh_cp);
                  Mor lh_to_hom = c.compose(h.cp_f, h.lh_p);
                  Mor rh_to_hom = c.compose(h.cp_f, h.rh_p);
                  Mor enc = c.pb_induced(lh_to_hom, rh_to_hom, lh, rh);
                  ++encoded[enc];
                  // src/tgt commute with the encoding
                  if (c.compose(h.src, enc) != a || c.compose(h.tgt, enc) != b) {
                    rep.detail = "endpoint projections do not commute";
                    return rep;
                  }
                }
              }
            }
          }
        }
      }
    }
    if (!count_only) {
      Backend& cc = *itt.C;
      std::vector<Mor> hom_side = cc.hom(probe, h.hiso);
      rep.hom_count = hom_side.size();
      if (rep.tuple_count != rep.hom_count) {
        rep.detail = "counts differ: hom " + std::to_string(rep.hom_count) + " vs tuples " +
                     std::to_string(rep.tuple_count);
        return rep;
      }
      for (auto& [m, n] : encoded)
        if (n != 1) {
          rep.detail = "encoding not injective";
          return rep;
        }
    }
    rep.pass = true;
    return rep;
  }
};

}  // namespace

RepReport representability_hiso(Itt& itt, const HIsoData& h, Obj probe) {
  // compare the counts first so corrupted objects fail cleanly before any
  // encoding is attempted
  HisoTuples counter{itt, h, probe, true};
  RepReport counted = counter.run();
  size_t hom_count = itt.C->hom(probe, h.hiso).size();
  if (counted.tuple_count != hom_count) {
    RepReport rep;
    rep.hom_count = hom_count;
    rep.tuple_count = counted.tuple_count;
    rep.detail = "counts differ: hom " + std::to_string(hom_count) + " vs tuples " +
                 std::to_string(counted.tuple_count);
    return rep;
  }
  HisoTuples t{itt, h, probe, false};
  return t.run();
}

RepReport representability_trv(Itt& itt, const HIsoData& h, Obj probe) {
  RepReport rep;
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  TupleSide ts{itt, h, probe, c, um};
  for (Mor a : c.hom(probe, um.u)) {
    ++rep.tuple_count;
    ExtData ea = um.extend(a);
    IdFactor ida = itt.id_of(um.canonical_fib(a));
    Mor pair_name = c.pb_induced(c.bang(um.u), c.bang(um.u), a, a);
    Mor idm = c.identity(ea.obj);
    Mor f_el = ts.encode_hom(true, pair_name, a, a, ea, ea, idm);
    Mor s_el = ts.encode_hom(false, pair_name, a, a, ea, ea, idm);
    Mor rh_cp = c.pb_induced(h.homba_pf.proj, h.homab_pf.proj, s_el, f_el);
    Mor refl_endo = ts.encode_endo(a, ea, idm);
    Mor refl_exe = ts.encode_homotopy(a, ea, ida, ida.refl);
    Mor refl_hid = c.pb_induced(itt.poly_map0, h.g, refl_exe, refl_endo);
    Mor rh = c.pb_induced(h.hid_to_endo, h.comp_at_a, refl_hid, rh_cp);
    Mor lh = c.pb_induced(h.hid_to_endo, h.comp_at_b, refl_hid, rh_cp);
    Mor lh_to_hom = c.compose(h.cp_f, h.lh_p);
    Mor rh_to_hom = c.compose(h.cp_f, h.rh_p);
    Mor enc = c.pb_induced(lh_to_hom, rh_to_hom, lh, rh);
    if (enc != c.compose(h.trv, a)) {
      rep.detail = "trv does not match the trivial tuple at " + c.show_mor(a);
      return rep;
    }
    ++rep.hom_count;
  }
  rep.pass = true;
  return rep;
}

FiberCount hiso_fiber_count(Itt& itt, const HIsoData& h, Mor a_pt, Mor b_pt) {
  FiberCount out;
  Backend& c = *itt.C;
  for (Mor pt : c.points(h.hiso)) {
    if (c.compose(h.src, pt) == a_pt && c.compose(h.tgt, pt) == b_pt) ++out.structural;
  }
  HisoTuples t{itt, h, c.terminal(), true, a_pt, b_pt};
  RepReport rep = t.run();
  out.brute = rep.tuple_count;
  return out;
}

}  // namespace ucat
