#include "ucat/poly.hpp"

#include <algorithm>
#include <map>

namespace ucat {

Mor pf_map(Backend& c, const Backend::Pf& pfx, const Backend::Pf& pfy, Mor h) {
  if (c.dom(h) != c.dom(pfx.x) || c.cod(h) != c.dom(pfy.x))
    throw std::runtime_error("pf_map: h does not connect the pushed objects");
  return c.pf_transpose(pfy, pfx.proj, c.compose(h, pfx.counit));
}

Polynomial polynomial_apply(Backend& c, Mor p, Obj x) {
  Obj e = c.dom(p);
  Backend::Prod exx = c.product(e, x);
  Backend::Pf pf = c.pushforward(p, exx.p1);
  return Polynomial{pf, pf.total, pf.proj, exx};
}

GenCompData gen_comp(Backend& c, Mor pprime, Mor p) {
  GenCompData gc;
  gc.p = p;
  gc.pprime = pprime;
  Obj e = c.dom(p);
  Obj eprime = c.dom(pprime), bprime = c.cod(pprime);
  gc.exb = c.product(e, bprime);
  gc.bot_pf = c.pushforward(p, gc.exb.p1);
  gc.bot = gc.bot_pf.total;
  gc.bot_to_base = gc.bot_pf.proj;
  // mid = p^* bot, with the counit as the evaluation
  gc.mid = gc.bot_pf.star.apex;
  gc.t1 = gc.bot_pf.star.to_f;
  gc.mid_to_e = gc.bot_pf.star.to_g;
  gc.ev = gc.bot_pf.counit;
  // top = pullback of p' along proj2 . ev
  Mor q = c.compose(gc.exb.p2, gc.ev);
  Backend::Pb tpb = c.pullback(q, pprime);
  gc.top = tpb.apex;
  gc.t2 = tpb.to_f;
  gc.top_to_eprime = tpb.to_g;
  gc.exe = c.product(e, eprime);
  gc.top_to_exe = c.pair_morph(e, eprime, c.compose(gc.mid_to_e, gc.t2), gc.top_to_eprime);
  gc.composite = c.compose(gc.t1, gc.t2);
  return gc;
}

Mor pullback_compare(Backend& c, Mor f, Mor g, Mor top, Mor left) {
  Backend::Pb pb = c.pullback(f, g);
  Obj apex = pb.apex;
  Obj target = c.dom(top);
  if (apex == target && pb.to_f == top && pb.to_g == left) return c.identity(apex);
  if (!c.enumerable(apex) || !c.enumerable(target))
    throw std::runtime_error("pullback_compare: needs finite apexes");
  std::vector<Mor> images;
  std::vector<Mor> tpts = c.points(target);
  for (Mor apt : c.points(apex)) {
    Mor want_f = c.compose(pb.to_f, apt);
    Mor want_g = c.compose(pb.to_g, apt);
    Mor found = kNone;
    for (Mor tpt : tpts) {
      if (c.compose(top, tpt) == want_f && c.compose(left, tpt) == want_g) {
        if (found != kNone)
          throw std::runtime_error("pullback_compare: non-unique factorization");
        found = tpt;
      }
    }
    if (found == kNone)
      throw std::runtime_error("pullback_compare: supplied square is not a pullback");
    images.push_back(found);
  }
  return c.mor_from_point_images(apex, target, images);
}

Mor pair_names(Backend& c, const GenCompData& gc, const NamedStage& s1,
               const NamedStage& s2) {
  Obj e = c.dom(gc.p);
  Obj bprime = c.cod(gc.pprime);
  // present X1 as the chosen pullback of (name1, p)
  Mor iota = pullback_compare(c, s1.name, gc.p, s1.q, s1.point);
  Backend::Pb pb = c.pullback(s1.name, gc.p);
  // the transpose datum (point1, name2) : X1 -> E x B' over E
  Mor f = c.pair_morph(e, bprime, c.compose(s1.point, iota), c.compose(s2.name, iota));
  (void)pb;
  return c.pf_transpose(gc.bot_pf, s1.name, f);
}

PairNamesCheck verify_pair_names(Backend& c, const GenCompData& gc, const NamedStage& s1,
                                 const NamedStage& s2, Mor pairing) {
  PairNamesCheck out;
  out.over_base = c.equal_on_points(c.compose(gc.bot_to_base, pairing), s1.name);
  // pull the tower back along the pairing; by the split discipline this
  // reproduces the named stages on the nose
  Backend::Pb pb1 = c.pullback(gc.t1, pairing);
  out.reproduced_mid = (pb1.apex == c.dom(s1.q)) && (pb1.to_g == s1.q);
  Mor mediating = pb1.to_f;  // X1 -> mid
  Backend::Pb pb2 = c.pullback(gc.t2, mediating);
  out.reproduced_top = (pb2.apex == c.dom(s2.q)) && (pb2.to_g == s2.q);
  return out;
}

DistributivityReport distributivity_check(Backend& c, const GenCompData& gc) {
  DistributivityReport rep;
  Obj e = c.dom(gc.p);

  // lhs: pushforward of the top stage along t1, an object over bot
  Backend::Pf lhs_pf = c.pushforward(gc.t1, gc.t2);
  Obj lhs = lhs_pf.total;
  // rhs: the polynomial image P_p(p') : p_*(E x E') -> p_*(E x B') = bot
  Backend::Pf exe_pf = c.pushforward(gc.p, gc.exe.p1);
  Mor exp = c.pair_morph(e, c.cod(gc.pprime), gc.exe.p1,
                         c.compose(gc.pprime, gc.exe.p2));  // E x p'
  Mor rhs_map = pf_map(c, exe_pf, gc.bot_pf, exp);          // p_*(E x E') -> bot
  Obj rhs = exe_pf.total;

  // the mate lhs -> rhs, built by transposition:
  //   p^*(lhs) --beta--> t1^*(lhs) --counit--> top --to_exe--> E x E'
  Mor lhs_to_b = c.compose(gc.bot_to_base, lhs_pf.proj);
  Backend::Pb pstar_lhs = c.pullback(lhs_to_b, gc.p);
  Mor alpha = c.pb_induced(gc.bot_pf.proj, gc.p, c.compose(lhs_pf.proj, pstar_lhs.to_f),
                           pstar_lhs.to_g);  // p^*(lhs) -> mid
  Mor beta = c.pb_induced(lhs_pf.proj, gc.t1, pstar_lhs.to_f, alpha);
  Mor f = c.compose(gc.top_to_exe, c.compose(lhs_pf.counit, beta));
  Mor mate = c.pf_transpose(exe_pf, lhs_to_b, f);  // lhs -> rhs

  if (c.enumerable(lhs) && c.enumerable(rhs)) {
    rep.lhs_size = *c.size_of(lhs);
    rep.rhs_size = *c.size_of(rhs);
    if (rep.lhs_size != rep.rhs_size) {
      rep.verdict = Verdict::FailNoFactor;
      rep.detail = "sizes differ: " + std::to_string(rep.lhs_size) + " vs " +
                   std::to_string(rep.rhs_size);
      return rep;
    }
    // mate must be a bijection over bot
    std::map<Mor, int> hits;
    for (Mor pt : c.points(lhs)) {
      Mor img = c.compose(mate, pt);
      if (++hits[img] > 1) {
        rep.verdict = Verdict::FailNonUnique;
        rep.detail = "mate is not injective";
        return rep;
      }
      if (c.compose(rhs_map, img) != c.compose(lhs_pf.proj, pt)) {
        rep.verdict = Verdict::FailNotCommuting;
        rep.detail = "mate does not live over bot";
        return rep;
      }
    }
    if (hits.size() != rep.rhs_size) {
      rep.verdict = Verdict::FailNoFactor;
      rep.detail = "mate is not surjective";
      return rep;
    }
    return rep;
  }
  rep.verdict = Verdict::Inapplicable;
  rep.detail = "lazy instance: restrict along sample points first";
  return rep;
}

AdjunctionReport verify_pushforward_adjunction(Backend& c, Mor p, Mor x, Mor y_to_b) {
  AdjunctionReport rep;
  Obj y = c.dom(y_to_b);
  Backend::Pf pf = c.pushforward(p, x);
  Backend::Pb py = c.pullback(y_to_b, p);
  // maps over B into the pushforward
  std::vector<Mor> over_b;
  for (Mor h : c.hom(y, pf.total))
    if (c.equal_on_points(c.compose(pf.proj, h), y_to_b)) over_b.push_back(h);
  // maps over E out of the pullback
  std::vector<Mor> over_e;
  for (Mor h : c.hom(py.apex, c.dom(x)))
    if (c.equal_on_points(c.compose(x, h), py.to_g)) over_e.push_back(h);
  rep.hom_base = over_b.size();
  rep.hom_total = over_e.size();
  if (over_b.size() != over_e.size()) {
    rep.detail = "hom-set sizes differ";
    return rep;
  }
  // transposition is a bijection between the two hom-sets
  std::map<Mor, int> seen;
  for (Mor h : over_b) {
    Mor tr = c.pf_untranspose(pf, y_to_b, h);
    if (std::find(over_e.begin(), over_e.end(), tr) == over_e.end()) {
      rep.detail = "untranspose leaves the hom-set";
      return rep;
    }
    if (++seen[tr] > 1) {
      rep.detail = "untranspose not injective";
      return rep;
    }
    // round trip
    if (c.pf_transpose(pf, y_to_b, tr) != h) {
      rep.detail = "transpose round trip failed";
      return rep;
    }
  }
  rep.bijective = true;
  return rep;
}

}  // namespace ucat
