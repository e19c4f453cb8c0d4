#include "ucat/backend.hpp"

#include <stdexcept>

namespace ucat {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::FailNotCommuting: return "FAIL(not-commuting)";
    case Verdict::FailNoFactor: return "FAIL(missing-factorization)";
    case Verdict::FailNonUnique: return "FAIL(non-unique-factorization)";
    case Verdict::Inapplicable: return "INAPPLICABLE";
  }
  return "?";
}

Backend::Prod Backend::product(Obj a, Obj b) {
  Pb pb = pullback(bang(a), bang(b));
  return {pb.apex, pb.to_f, pb.to_g};
}

Mor Backend::pair_morph(Obj a, Obj b, Mor u, Mor v) {
  return pb_induced(bang(a), bang(b), u, v);
}

bool Backend::equal_on_points(Mor f, Mor g) {
  if (dom(f) != dom(g) || cod(f) != cod(g)) return false;
  if (f == g) return true;
  if (!enumerable(dom(f)))
    throw std::runtime_error("equal_on_points: non-enumerable domain");
  for (Mor pt : points(dom(f)))
    if (compose(f, pt) != compose(g, pt)) return false;
  return true;
}

std::vector<std::pair<Mor, Mor>> enumerate_cones(Backend& c, Obj p, Mor right, Mor bot) {
  Obj cc = c.dom(right);
  Obj bb = c.dom(bot);
  if (!c.enumerable(p) || !c.enumerable(bb))
    throw std::runtime_error("enumerate_cones: probe or base not enumerable");
  std::vector<std::pair<Mor, Mor>> cones;
  if (c.enumerable(cc)) {
    for (Mor v : c.hom(p, bb))
      for (Mor u : c.hom(p, cc))
        if (c.compose(right, u) == c.compose(bot, v)) cones.emplace_back(u, v);
    return cones;
  }
  // lazy C: build u pointwise from fibers of `right`
  std::vector<Mor> pts = c.points(p);
  for (Mor v : c.hom(p, bb)) {
    std::vector<std::vector<Mor>> cand;  // per point of P, candidates in C
    bool ok = true;
    for (Mor pt : pts) {
      auto fib = c.fiber_points(right, c.compose(bot, c.compose(v, pt)));
      if (!fib) throw std::runtime_error("enumerate_cones: right leg has no fibers");
      if (fib->empty()) {
        ok = false;
        break;
      }
      cand.push_back(*fib);
    }
    if (!ok) continue;
    if (pts.empty()) {
      cones.emplace_back(c.mor_from_point_images(p, cc, {}), v);
      continue;
    }
    std::vector<size_t> idx(pts.size(), 0);
    while (true) {
      std::vector<Mor> images;
      images.reserve(pts.size());
      for (size_t i = 0; i < pts.size(); ++i) images.push_back(cand[i][idx[i]]);
      cones.emplace_back(c.mor_from_point_images(p, cc, images), v);
      size_t i = pts.size();
      while (i > 0 && ++idx[i - 1] == cand[i - 1].size()) idx[--i] = 0;
      if (i == 0) break;
    }
  }
  return cones;
}

SquareReport verify_pullback_square(Backend& c, const Square& sq,
                                    const std::vector<Probe>& probes) {
  SquareReport rep;
  Obj a = c.dom(sq.top);
  // commutation, extensional when A is enumerable
  if (c.enumerable(a)) {
    if (!c.equal_on_points(c.compose(sq.right, sq.top), c.compose(sq.bot, sq.left))) {
      rep.verdict = Verdict::FailNotCommuting;
      rep.detail = "square does not commute";
      return rep;
    }
  }
  for (const Probe& pr : probes) {
    if (!c.enumerable(pr.obj)) {
      rep.verdict = Verdict::Inapplicable;
      rep.detail = "non-enumerable probe";
      return rep;
    }
    std::vector<std::pair<Mor, Mor>> cones;
    try {
      cones = enumerate_cones(c, pr.obj, sq.right, sq.bot);
    } catch (const std::exception& e) {
      rep.verdict = Verdict::Inapplicable;
      rep.detail = e.what();
      return rep;
    }
    std::vector<Mor> pts = c.points(pr.obj);
    for (auto& [u, v] : cones) {
      ++rep.cones;
      // factorizations h : P -> A are determined pointwise
      uint64_t count = 1;
      if (!c.enumerable(a)) {
        rep.verdict = Verdict::Inapplicable;
        rep.detail = "apex not enumerable";
        return rep;
      }
      std::vector<Mor> apts = c.points(a);
      for (Mor pt : pts) {
        Mor upt = c.compose(u, pt);
        Mor vpt = c.compose(v, pt);
        uint64_t here = 0;
        for (Mor apt : apts)
          if (c.compose(sq.top, apt) == upt && c.compose(sq.left, apt) == vpt) ++here;
        count *= here;
        if (count == 0) break;
        if (count > 1) break;
      }
      if (count == 0) {
        rep.verdict = Verdict::FailNoFactor;
        rep.detail = "cone from probe " + c.show_obj(pr.obj) + " does not factor";
        return rep;
      }
      if (count > 1) {
        rep.verdict = Verdict::FailNonUnique;
        rep.detail = "cone from probe " + c.show_obj(pr.obj) + " factors non-uniquely";
        return rep;
      }
    }
  }
  return rep;
}

std::vector<Probe> standard_probes(Backend&) {
  // concrete backends override with {0, 1, 2}; the generic fallback is filled
  // in by callers
  return {};
}

}  // namespace ucat
