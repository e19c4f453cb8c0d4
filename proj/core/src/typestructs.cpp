#include "ucat/typestructs.hpp"

#include "ucat/codeset.hpp"

#include <algorithm>

namespace ucat {

// ---------------------------------------------------------------------------
// shared closure operations

namespace {
NamedStage stage_of(const Fibrancy& f) { return NamedStage{f.p, f.name, f.point}; }
}  // namespace

Fibrancy Itt::compose_fib(const Fibrancy& lower, const Fibrancy& upper) {
  if (!sigma) require_sigma();
  Backend& c = *C;
  const GenCompData& gc = sigma->gc;
  Mor pairing = pair_names(c, gc, stage_of(lower), stage_of(upper));
  Mor name = c.compose(sigma->fib.name, pairing);
  // mediate the stages into the tower and read the point off its structure
  Mor x1_to_mid = c.pb_induced(gc.bot_pf.proj, gc.p, c.compose(pairing, lower.p),
                               lower.point);
  Mor q = c.compose(gc.exb.p2, gc.ev);
  Mor m_top = c.pb_induced(q, gc.pprime, c.compose(x1_to_mid, upper.p), upper.point);
  Mor point = c.compose(sigma->fib.point, m_top);
  return Fibrancy{c.compose(lower.p, upper.p), name, point};
}

Fibrancy Itt::hom_fib(const Fibrancy& a, const Fibrancy& b) {
  return push_name(a, um.rebase(b, a.p));
}

IdFactor Itt::id_of(const Fibrancy& fib) {
  // the generic extension route: the Id object is the selected pullback along
  // Id composed with the paired points, and refl is a bijection onto it in
  // strict-Id backends
  Backend& c = *C;
  if (!id) throw std::runtime_error("id_of: no pre-Id structure");
  IdFactor out;
  out.base = c.cod(fib.p);
  out.e_fib = fib;
  Backend::Pb pexe = c.pullback(fib.p, fib.p);
  out.exe = pexe.apex;
  out.pr0 = pexe.to_f;
  out.pr1 = pexe.to_g;
  out.exe_anchor = c.compose(fib.p, pexe.to_f);
  Obj e = c.dom(fib.p);
  out.diag = c.pb_induced(fib.p, fib.p, c.identity(e), c.identity(e));
  Mor pairing = c.pb_induced(um.pi, um.pi, c.compose(fib.point, out.pr0),
                             c.compose(fib.point, out.pr1));
  Mor n_id = c.compose(id->pre.id_map, pairing);
  ExtData ext = um.extend(n_id);
  out.idobj = ext.obj;
  out.evd = ext.proj;
  out.evd_fib = Fibrancy{ext.proj, n_id, ext.var};
  out.ev0 = c.compose(out.pr0, out.evd);
  out.ev1 = c.compose(out.pr1, out.evd);
  out.id_anchor = c.compose(out.exe_anchor, out.evd);
  out.refl = c.pb_induced(um.pi, n_id, c.compose(id->pre.refl_name, fib.point), out.diag);
  out.refl_lift = iso_left_lift(c, um, out.refl, out.base, fib.p, out.id_anchor, out.ev0);
  return out;
}

Mor Itt::derive_transport(const Fibrancy& f, const IdFactor& idf) {
  Backend& c = *C;
  if (c.cod(f.p) != c.dom(idf.e_fib.p))
    throw std::runtime_error("derive_transport: f is not over the factored object");
  Backend::Pb pb0 = c.pullback(f.p, idf.ev0);
  Backend::Pb pb1 = c.pullback(f.p, idf.ev1);
  Fibrancy e0fib{pb0.to_g, c.compose(f.name, idf.ev0), c.compose(f.point, pb0.to_f)};
  Fibrancy e1fib{pb1.to_g, c.compose(f.name, idf.ev1), c.compose(f.point, pb1.to_f)};
  LiftOracle orc;
  Itt* self = this;
  orc.push_name = [self](const Fibrancy& along, const Fibrancy& of) {
    return self->push_name(along, of);
  };
  orc.transport_along = [](const Fibrancy&, const IdFactor&, Mor, Mor) -> Mor {
    throw std::runtime_error("derive_transport: no nested transport");
  };
  LeftLift lsj = transfer_pullback(idf.refl_lift, e0fib, orc);
  Backend::Pb pbv = c.pullback(idf.refl, pb0.to_g);  // to_f -> W, to_g -> pb0.apex
  Obj v = idf.base;
  Mor u = c.pb_induced(f.p, idf.ev1, c.compose(pb0.to_f, pbv.to_g),
                       c.compose(idf.refl, pbv.to_f));
  return lsj.solve({c.identity(v), e1fib, u, pb0.to_g});
}

Mor Itt::transport_along(const Fibrancy& f, const IdFactor& idf, Mor h, Mor m) {
  Backend& c = *C;
  Mor tr = derive_transport(f, idf);
  Backend::Pb pb0 = c.pullback(f.p, idf.ev0);
  Backend::Pb pb1 = c.pullback(f.p, idf.ev1);
  Mor mu = c.pb_induced(f.p, idf.ev0, m, h);
  (void)pb0;
  return c.compose(pb1.to_f, c.compose(tr, mu));
}

LiftOracle Itt::oracle() {
  LiftOracle orc;
  Itt* self = this;
  orc.push_name = [self](const Fibrancy& along, const Fibrancy& of) {
    return self->push_name(along, of);
  };
  orc.transport_along = [self](const Fibrancy& f, const IdFactor& idf, Mor h, Mor m) {
    return self->transport_along(f, idf, h, m);
  };
  return orc;
}

// ---------------------------------------------------------------------------
// codeset type structures

namespace {

class CodesetItt : public Itt {
 public:
  Codeset* cs = nullptr;
  bool is_code_universe = true;
  const Codeset::FiniteUniverse* fu = nullptr;

  Fibrancy push_name(const Fibrancy& along, const Fibrancy& of) override {
    require_sigma();
    require_pi();
    Codeset& k = *cs;
    Mor pairing = pair_names(k, sigma->gc, stage_of(along), stage_of(of));
    Mor name = k.compose(pi->fib.name, pairing);
    Backend::Pf pf = k.pushforward(along.p, of.p);
    TermArena& a = k.arena();
    Mor point;
    if (is_code_universe) {
      // (b, [e -> x]) -> (Pi-code, [raw(e) -> raw(x)])
      Mor alpt = along.point, ofpt = of.point;
      Mor nm = name;
      Codeset* kp = &k;
      std::function<TermId(TermId)> fn = [kp, &a, alpt, ofpt, nm](TermId t) {
        TermId code = kp->apply(nm, a.fst(t));
        std::vector<std::pair<TermId, TermId>> tbl;
        for (auto& [e, x] : a.table_entries(a.snd(t)))
          tbl.emplace_back(a.snd(kp->apply(alpt, e)), a.snd(kp->apply(ofpt, x)));
        return a.pair(code, a.fun(std::move(tbl)));
      };
      point = k.lazy_mor(pf.total, um.tu, "piPoint(m" + std::to_string(pf.proj) + ")", fn);
    } else {
      // order-preserving bijection onto the named code's elements
      Mor nm = name;
      Mor proj = pf.proj;
      Codeset* kp = &k;
      std::function<TermId(TermId)> fn = [kp, &a, nm, proj](TermId t) {
        TermId b = a.fst(t);
        TermId code = kp->apply(nm, b);
        auto fib = kp->fiber_elems(proj, b);
        if (!fib) throw std::runtime_error("push_name: fibers not enumerable");
        auto it = std::find(fib->begin(), fib->end(), t);
        size_t idx = size_t(it - fib->begin());
        const auto& es = kp->el(code);
        if (es.size() != fib->size())
          throw std::runtime_error("push_name: named code has the wrong size");
        return a.pair(code, es[idx]);
      };
      point = k.lazy_mor(pf.total, um.tu, "piPoint(m" + std::to_string(pf.proj) + ")", fn);
    }
    return Fibrancy{pf.proj, name, point};
  }
};

Mor sigma_name_code(Codeset& k, const UniversalMap& um, const GenCompData& gc, bool pi_mode) {
  TermArena& a = k.arena();
  Codeset* kp = &k;
  std::function<TermId(TermId)> fn = [kp, &a, pi_mode](TermId w) {
    TermId base = a.fst(w);
    std::vector<std::pair<TermId, TermId>> tbl;
    for (auto& [e, v] : a.table_entries(a.snd(w))) tbl.emplace_back(a.snd(e), a.snd(v));
    return pi_mode ? a.pi_code(base, std::move(tbl)) : a.sigma_code(base, std::move(tbl));
  };
  Obj dom = pi_mode ? kNone : gc.bot;
  (void)dom;
  return k.lazy_mor(gc.bot, um.u, pi_mode ? "PiName" : "SigmaName", fn);
}

}  // namespace

std::shared_ptr<Itt> build_itt_code(Codeset& cs) {
  auto itt = std::make_shared<CodesetItt>();
  itt->C = &cs;
  itt->cs = &cs;
  itt->is_code_universe = true;
  itt->um = code_umap(cs);
  TermArena& a = cs.arena();
  UniversalMap& um = itt->um;

  itt->unit = UnitStructure{um.classify(cs.identity(cs.terminal()))->name};

  // Sigma
  {
    SigmaStructure st;
    st.gc = gen_comp(cs, um.pi, um.pi);
    Mor name = sigma_name_code(cs, um, st.gc, false);
    Codeset* kp = &cs;
    std::function<TermId(TermId)> pt = [kp, &a](TermId t) {
      // t = Pair(Pair(w, x), b) with w = (A, table), x in el(A), b in the value
      TermId mid = a.fst(t);
      TermId b = a.snd(t);
      TermId w = a.fst(mid);
      TermId x = a.snd(mid);
      TermId base = a.fst(w);
      std::vector<std::pair<TermId, TermId>> tbl;
      for (auto& [e, v] : a.table_entries(a.snd(w))) tbl.emplace_back(a.snd(e), a.snd(v));
      return a.pair(a.sigma_code(base, std::move(tbl)), a.pair(x, b));
    };
    Mor point = cs.lazy_mor(st.gc.top, um.tu, "SigmaPoint", pt);
    st.fib = Fibrancy{st.gc.composite, name, point};
    itt->sigma = st;
    itt->gc0 = st.gc;
  }
  // Pi
  {
    PiStructure st;
    Backend::Prod exe = cs.product(um.tu, um.tu);
    Backend::Prod exb = cs.product(um.tu, um.u);
    st.exe_pf = cs.pushforward(um.pi, exe.p1);
    st.exb_pf = cs.pushforward(um.pi, exb.p1);
    Mor tupi = cs.pair_morph(um.tu, um.u, exe.p1, cs.compose(um.pi, exe.p2));
    st.map = pf_map(cs, st.exe_pf, st.exb_pf, tupi);
    // the polynomial map has finite fibers over each classified point even
    // though its domain does not: enumerate value tables directly
    {
      Codeset* kp = &cs;
      TermArena* ap = &a;
      cs.set_fiber_fn(st.map, [kp, ap](TermId w) -> std::optional<std::vector<TermId>> {
        TermArena& ar = *ap;
        TermId base = ar.fst(w);
        auto entries = ar.table_entries(ar.snd(w));  // values Pair(key, code)
        std::vector<std::vector<TermId>> choices;
        for (auto& [k, v] : entries) choices.push_back(kp->el(ar.snd(v)));
        for (auto& ch : choices)
          if (ch.empty()) return std::vector<TermId>{};
        std::vector<TermId> out;
        std::vector<size_t> idx(entries.size(), 0);
        while (true) {
          std::vector<std::pair<TermId, TermId>> tbl;
          for (size_t i = 0; i < entries.size(); ++i) {
            TermId key = entries[i].first;
            TermId code = ar.snd(entries[i].second);
            tbl.emplace_back(key, ar.pair(key, ar.pair(code, choices[i][idx[i]])));
          }
          out.push_back(ar.pair(base, ar.fun(std::move(tbl))));
          size_t i = entries.size();
          while (i > 0 && ++idx[i - 1] == choices[i - 1].size()) idx[--i] = 0;
          if (i == 0) break;
        }
        canonicalize_elems(ar, out);
        return out;
      });
    }
    Mor name = sigma_name_code(cs, um, itt->sigma->gc, true);
    Codeset* kp = &cs;
    std::function<TermId(TermId)> pt = [kp, &a](TermId t) {
      // t = Pair(A, [tU-key -> Pair(tU-key, (c, v))])
      TermId base = a.fst(t);
      std::vector<std::pair<TermId, TermId>> codes, vals;
      for (auto& [e, v] : a.table_entries(a.snd(t))) {
        TermId raw = a.snd(e);
        TermId cv = a.snd(v);
        codes.emplace_back(raw, a.fst(cv));
        vals.emplace_back(raw, a.snd(cv));
      }
      return a.pair(a.pi_code(base, std::move(codes)), a.fun(std::move(vals)));
    };
    Mor point = cs.lazy_mor(st.exe_pf.total, um.tu, "PiPoint", pt);
    st.fib = Fibrancy{st.map, name, point};
    itt->pi = st;
    itt->exe_pf0 = st.exe_pf;
    itt->poly_map0 = st.map;
  }
  // pre-Id and Id
  {
    PreIdStructure pre;
    Backend::Pb tt = cs.pullback(um.pi, um.pi);
    pre.tutu = tt.apex;
    pre.pr0 = tt.to_f;
    pre.pr1 = tt.to_g;
    pre.diag = cs.pb_induced(um.pi, um.pi, cs.identity(um.tu), cs.identity(um.tu));
    Codeset* kp = &cs;
    std::function<TermId(TermId)> idfn = [kp, &a](TermId t) {
      // tutu elements: Pair((A, x), y)
      TermId u = a.fst(t);
      return a.id_code(a.fst(u), a.snd(u), a.snd(t));
    };
    pre.id_map = cs.lazy_mor(pre.tutu, um.u, "IdName", idfn);
    std::function<TermId(TermId)> rfn = [kp, &a](TermId t) {
      TermId code = a.id_code(a.fst(t), a.snd(t), a.snd(t));
      return a.pair(code, kp->el(code)[0]);
    };
    pre.refl_name = cs.lazy_mor(um.tu, um.tu, "ReflName", rfn);
    itt->id = IdStructure{pre, IdFactor{}};
    itt->id->generic =
        itt->id_of(Fibrancy{um.pi, cs.identity(um.u), cs.identity(um.tu)});
  }
  return itt;
}

std::shared_ptr<Itt> build_itt_finite(Codeset& cs, const std::string& universe_name) {
  const auto* fu = cs.find_universe(universe_name);
  if (!fu) throw std::runtime_error("unknown finite universe " + universe_name);
  auto itt = std::make_shared<CodesetItt>();
  itt->C = &cs;
  itt->cs = &cs;
  itt->is_code_universe = false;
  itt->fu = fu;
  itt->um = finite_umap(cs, universe_name);
  TermArena& a = cs.arena();
  UniversalMap& um = itt->um;

  auto u = um.classify(cs.identity(cs.terminal()));
  if (u) itt->unit = UnitStructure{u->name};

  // Sigma: classify the generic composite; a refusal records the obstruction
  {
    SigmaStructure st;
    st.gc = gen_comp(cs, um.pi, um.pi);
    itt->gc0 = st.gc;
    auto fib = um.classify(st.gc.composite);
    if (!fib) {
      for (TermId w : cs.elems(st.gc.bot)) {
        auto f = cs.fiber_elems(st.gc.composite, w);
        bool found = false;
        for (TermId code : fu->codes)
          if (cs.el(code).size() == f->size()) found = true;
        if (!found) {
          itt->sigma_obstruction = "build_sigma(" + universe_name +
                                   "): composite fiber of size " + std::to_string(f->size()) +
                                   " has no name";
          break;
        }
      }
      if (itt->sigma_obstruction.empty())
        itt->sigma_obstruction = "build_sigma(" + universe_name + "): unnameable";
    } else {
      st.fib = *fib;
      itt->sigma = st;
    }
  }
  // Pi
  {
    PiStructure st;
    Backend::Prod exe = cs.product(um.tu, um.tu);
    Backend::Prod exb = cs.product(um.tu, um.u);
    st.exe_pf = cs.pushforward(um.pi, exe.p1);
    st.exb_pf = cs.pushforward(um.pi, exb.p1);
    Mor tupi = cs.pair_morph(um.tu, um.u, exe.p1, cs.compose(um.pi, exe.p2));
    st.map = pf_map(cs, st.exe_pf, st.exb_pf, tupi);
    itt->exe_pf0 = st.exe_pf;
    itt->poly_map0 = st.map;
    auto fib = um.classify(st.map);
    if (!fib) {
      for (TermId w : cs.elems(st.exb_pf.total)) {
        auto f = cs.fiber_elems(st.map, w);
        bool found = false;
        for (TermId code : fu->codes)
          if (cs.el(code).size() == f->size()) found = true;
        if (!found) {
          itt->pi_obstruction = "build_pi(" + universe_name + "): polynomial fiber of size " +
                                std::to_string(f->size()) + " has no name";
          break;
        }
      }
      if (itt->pi_obstruction.empty())
        itt->pi_obstruction = "build_pi(" + universe_name + "): unnameable";
    } else {
      st.fib = *fib;
      itt->pi = st;
    }
  }
  // pre-Id and Id from the declared table
  if (fu->id_code) {
    PreIdStructure pre;
    Backend::Pb tt = cs.pullback(um.pi, um.pi);
    pre.tutu = tt.apex;
    pre.pr0 = tt.to_f;
    pre.pr1 = tt.to_g;
    pre.diag = cs.pb_induced(um.pi, um.pi, cs.identity(um.tu), cs.identity(um.tu));
    auto idc = fu->id_code;
    Codeset* kp = &cs;
    pre.id_map = cs.fin_mor_fn(pre.tutu, um.u, [kp, &a, idc](TermId t) {
      TermId u = a.fst(t);
      return idc(a.fst(u), a.snd(u), a.snd(t));
    });
    pre.refl_name = cs.fin_mor_fn(um.tu, um.tu, [kp, &a, idc](TermId t) {
      TermId code = idc(a.fst(t), a.snd(t), a.snd(t));
      return a.pair(code, kp->el(code)[0]);
    });
    itt->id = IdStructure{pre, IdFactor{}};
    itt->id->generic =
        itt->id_of(Fibrancy{um.pi, cs.identity(um.u), cs.identity(um.tu)});
  }
  return itt;
}

// ---------------------------------------------------------------------------
// verification

SquareReport verify_structure_square(Backend& c, const UniversalMap& um, const Fibrancy& f,
                                     const std::vector<Probe>& probes,
                                     const std::vector<Mor>& base_samples) {
  if (c.enumerable(c.cod(f.p))) return verify_fibrancy(c, um, f, probes);
  SquareReport agg;
  for (Mor pt : base_samples) {
    Fibrancy local = um.rebase(f, pt);
    SquareReport r = verify_fibrancy(c, um, local, probes);
    agg.cones += r.cones;
    if (!r.pass()) {
      r.detail += " (at sample " + c.show_mor(pt) + ")";
      return r;
    }
  }
  return agg;
}

ClosureReport closure_checks(Itt& itt, const Fibrancy& upper, const Fibrancy& lower,
                             const std::vector<Probe>& probes) {
  ClosureReport rep;
  Backend& c = *itt.C;
  try {
    Fibrancy comp = itt.compose_fib(lower, upper);
    rep.compose_ok = verify_fibrancy(c, itt.um, comp, probes).pass();
    if (!rep.compose_ok) {
      rep.detail = "composite square failed";
      return rep;
    }
    Fibrancy pushed = itt.push_name(lower, upper);
    rep.push_ok = verify_fibrancy(c, itt.um, pushed, probes).pass();
    if (!rep.push_ok) {
      rep.detail = "pushforward square failed";
      return rep;
    }
    Fibrancy pifib{itt.um.pi, c.identity(itt.um.u), c.identity(itt.um.tu)};
    Fibrancy homf = itt.hom_fib(pifib, pifib);
    rep.hom_ok = verify_fibrancy(c, itt.um, homf, probes).pass();
    if (!rep.hom_ok) rep.detail = "internal-hom square failed";
  } catch (const std::exception& e) {
    rep.detail = e.what();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// pullback-Hom encoding of the generic J-problem (finite universes)

namespace {

// [A, B]_S as an object via pushforward of the product projection
Backend::Pf homobj(Backend& c, Mor a_anchor, Mor b_anchor) {
  Backend::Pb prod = c.pullback(a_anchor, b_anchor);
  return c.pushforward(a_anchor, prod.to_f);
}

}  // namespace

PullbackHomData make_pullback_hom(Itt& itt) {
  Backend& c = *itt.C;
  Codeset& k = dynamic_cast<Codeset&>(c);
  TermArena& a = k.arena();
  const UniversalMap& um = itt.um;
  if (!c.enumerable(um.u)) throw std::runtime_error("make_pullback_hom: finite universes only");
  const IdFactor& idf = itt.id->generic;
  Backend::Prod uxtu = c.product(um.u, um.tu);
  Backend::Prod uxu = c.product(um.u, um.u);
  // the two targets as objects over U via the first projection
  Mor t_val = uxtu.p1;
  Mor t_ty = uxu.p1;
  Backend::Pf diag_pf = homobj(c, idf.id_anchor, t_val);
  Backend::Pf sq1_pf = homobj(c, um.pi, t_val);
  Backend::Pf sq2_pf = homobj(c, idf.id_anchor, t_ty);
  Backend::Pf sqb_pf = homobj(c, um.pi, t_ty);
  Mor bang_u = c.bang(um.u);

  // table values are product-pullback apex elements; decompose and rebuild
  // through the legs so the representation stays shape-agnostic
  auto targ_of = [&](Mor a_anchor, Mor b_anchor, TermId val) {
    Backend::Pb prod = c.pullback(a_anchor, b_anchor);
    return k.apply(prod.to_g, val);
  };
  // restriction [IdObj, T] -> [tU, T]: precompose tables with refl
  auto restrict_refl = [&](const Backend::Pf& from, const Backend::Pf& to, Mor b_anchor) {
    return k.fin_mor_fn(from.total, to.total, [&, b_anchor](TermId t) {
      TermId s = a.fst(t);
      std::vector<std::pair<TermId, TermId>> tbl;
      auto pifib = k.fiber_elems(um.pi, s);
      for (TermId e : *pifib) {
        TermId ie = k.apply(idf.refl, e);
        TermId val = *a.table_get(a.snd(t), ie);
        TermId targ = targ_of(idf.id_anchor, b_anchor, val);
        tbl.emplace_back(e, k.apex_elem_of(um.pi, b_anchor, e, targ));
      }
      return a.pair(s, a.fun(std::move(tbl)));
    });
    (void)to;
  };
  // postcomposition [Y, U x tU] -> [Y, U x U]
  auto post_pi = [&](const Backend::Pf& from, const Backend::Pf& to, Mor y_anchor) {
    return k.fin_mor_fn(from.total, to.total, [&, y_anchor](TermId t) {
      TermId s = a.fst(t);
      std::vector<std::pair<TermId, TermId>> tbl;
      for (auto& [kk, vv] : a.table_entries(a.snd(t))) {
        TermId targ = targ_of(y_anchor, uxtu.p1, vv);  // in U x tU
        TermId cpart = k.apply(uxtu.p1, targ);
        TermId code = k.apply(um.pi, k.apply(uxtu.p2, targ));
        TermId newt = k.apex_elem_of(bang_u, bang_u, cpart, code);
        tbl.emplace_back(kk, k.apex_elem_of(y_anchor, uxu.p1, kk, newt));
      }
      return a.pair(s, a.fun(std::move(tbl)));
    });
    (void)to;
  };
  Mor r1 = restrict_refl(diag_pf, sq1_pf, uxtu.p1);
  Mor p1m = post_pi(sq1_pf, sqb_pf, um.pi);
  Mor p2m = post_pi(diag_pf, sq2_pf, idf.id_anchor);
  Mor r2b = restrict_refl(sq2_pf, sqb_pf, uxu.p1);
  Backend::Pb sq = c.pullback(p1m, r2b);
  PullbackHomData out;
  out.diag = diag_pf.total;
  out.sq = sq.apex;
  out.diag_anchor = diag_pf.proj;
  out.sq_anchor = c.compose(sq1_pf.proj, sq.to_f);
  out.dmap = c.pb_induced(p1m, r2b, r1, p2m);
  return out;
}

namespace {

struct GenericTarget {
  Backend::Prod uxtu, uxu;
  Fibrancy fib;  // U x pi : U x tU -> U x U, named over U by the second leg
};

GenericTarget generic_target(Itt& itt) {
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  GenericTarget t;
  t.uxtu = c.product(um.u, um.tu);
  t.uxu = c.product(um.u, um.u);
  Mor p = c.pair_morph(um.u, um.u, t.uxtu.p1, c.compose(um.pi, t.uxtu.p2));
  t.fib = Fibrancy{p, t.uxu.p2, t.uxtu.p2};
  return t;
}

}  // namespace

Mor structure_to_section(Itt& itt, const PullbackHomData& ph, const LeftLift& j) {
  Backend& c = *itt.C;
  Codeset& k = dynamic_cast<Codeset&>(c);
  TermArena& a = k.arena();
  const UniversalMap& um = itt.um;
  const IdFactor& idf = itt.id->generic;
  GenericTarget gt = generic_target(itt);
  Backend::Pb prod_sq1 = c.pullback(um.pi, gt.uxtu.p1);
  Backend::Pb prod_sq2 = c.pullback(idf.id_anchor, gt.uxu.p1);
  std::vector<Mor> images;
  for (TermId sqe : k.elems(ph.sq)) {
    TermId h1 = a.fst(sqe);
    TermId h2 = a.snd(sqe);
    TermId s = a.fst(h1);
    Mor x = k.point(um.u, s);
    Backend::Pb ck = c.pullback(um.pi, x);
    Backend::Pb cl = c.pullback(idf.id_anchor, x);
    Mor u = k.fin_mor_fn(ck.apex, gt.uxtu.obj, [&](TermId t) {
      TermId tu_elem = k.apply(ck.to_f, t);
      TermId val = *a.table_get(a.snd(h1), tu_elem);
      return k.apply(prod_sq1.to_g, val);
    });
    Mor v = k.fin_mor_fn(cl.apex, gt.uxu.obj, [&](TermId t) {
      TermId iota = k.apply(cl.to_f, t);
      TermId val = *a.table_get(a.snd(h2), iota);
      return k.apply(prod_sq2.to_g, val);
    });
    Mor filler = j.solve({x, gt.fib, u, v});
    // encode the filler as a Diag element over s
    std::vector<std::pair<TermId, TermId>> tbl;
    auto idfib = k.fiber_elems(idf.id_anchor, s);
    TermId star = a.star();
    for (TermId iota : *idfib) {
      TermId lelem = k.apex_elem_of(idf.id_anchor, x, iota, star);
      TermId val = k.apply(filler, lelem);
      tbl.emplace_back(iota, k.apex_elem_of(idf.id_anchor, gt.uxtu.p1, iota, val));
    }
    TermId delem = a.pair(s, a.fun(std::move(tbl)));
    images.push_back(k.point(ph.diag, delem));
  }
  return k.mor_from_point_images(ph.sq, ph.diag, images);
}

LeftLift section_to_structure(Itt& itt, const PullbackHomData& ph, Mor section) {
  (void)ph;
  Backend& c = *itt.C;
  const UniversalMap& um = itt.um;
  const IdFactor& idf = itt.id->generic;
  LeftLift ls;
  ls.C = &c;
  ls.um = &um;
  ls.i = idf.refl;
  ls.s = idf.base;
  ls.k_anchor = um.pi;
  ls.l_anchor = idf.id_anchor;
  ls.full = true;
  Itt* ittp = &itt;
  ls.solver = [ittp, section](const LiftInstance& inst) {
    Itt& it = *ittp;
    Codeset& kk = dynamic_cast<Codeset&>(*it.C);
    TermArena& a = kk.arena();
    const UniversalMap& u2 = it.um;
    const IdFactor& idf2 = it.id->generic;
    GenericTarget gt = generic_target(it);
    Mor bang_u = kk.bang(u2.u);
    Backend::Pb cl = kk.pullback(idf2.id_anchor, inst.x_anchor);

    std::vector<Mor> images;
    for (TermId lt : kk.elems(cl.apex)) {
      TermId iota = kk.apply(cl.to_f, lt);
      TermId xi = kk.apply(cl.to_g, lt);
      TermId s = kk.apply(inst.x_anchor, xi);
      // assemble the square element at s from the instance data
      std::vector<std::pair<TermId, TermId>> t1, t2;
      for (TermId y : kk.el(s)) {
        TermId tu_elem = a.pair(s, y);
        TermId kelem = kk.apex_elem_of(u2.pi, inst.x_anchor, tu_elem, xi);
        TermId val = kk.apply(inst.target.point, kk.apply(inst.u, kelem));
        TermId gen = kk.apex_elem_of(bang_u, bang_u, s, val);
        t1.emplace_back(tu_elem, kk.apex_elem_of(u2.pi, gt.uxtu.p1, tu_elem, gen));
      }
      auto idfib2 = kk.fiber_elems(idf2.id_anchor, s);
      for (TermId i2 : *idfib2) {
        TermId lelem = kk.apex_elem_of(idf2.id_anchor, inst.x_anchor, i2, xi);
        TermId code = kk.apply(inst.target.name, kk.apply(inst.v, lelem));
        TermId gen = kk.apex_elem_of(bang_u, bang_u, s, code);
        t2.emplace_back(i2, kk.apex_elem_of(idf2.id_anchor, gt.uxu.p1, i2, gen));
      }
      TermId sqe = a.pair(a.pair(s, a.fun(std::move(t1))), a.pair(s, a.fun(std::move(t2))));
      TermId delem = kk.apply(section, sqe);
      TermId dval = *a.table_get(a.snd(delem), iota);
      Backend::Pb prod_diag = kk.pullback(idf2.id_anchor, gt.uxtu.p1);
      TermId tuval = kk.apply(gt.uxtu.p2, kk.apply(prod_diag.to_g, dval));
      // mediate from the generic value back into the target fibration
      Mor vpt = kk.compose(inst.v, kk.point(cl.apex, lt));
      auto fib = kk.fiber_points(inst.target.p, vpt);
      Mor found = kNone;
      for (Mor cand : *fib)
        if (kk.apply(inst.target.point, kk.point_elem(cand)) == tuval) {
          found = cand;
          break;
        }
      if (found == kNone)
        throw std::runtime_error("section_to_structure: generic value has no preimage");
      images.push_back(found);
    }
    return kk.mor_from_point_images(cl.apex, kk.dom(inst.target.p), images);
  };
  return ls;
}

}  // namespace ucat
