#include "ucat/universe.hpp"

#include "ucat/codeset.hpp"

#include <algorithm>
#include <variant>

namespace ucat {

ExtData UniversalMap::extend(Mor name) const {
  if (C->cod(name) != u) throw std::runtime_error("extend: name not valued in the universe");
  Backend::Pb pb = C->pullback(pi, name);
  return ExtData{pb.apex, pb.to_g, pb.to_f};
}

Fibrancy UniversalMap::canonical_fib(Mor name) const {
  ExtData e = extend(name);
  return Fibrancy{e.proj, name, e.var};
}

std::optional<Fibrancy> UniversalMap::classify(Mor p) const {
  last_refusal.clear();
  return classifier(p);
}

Fibrancy UniversalMap::rebase(const Fibrancy& f, Mor g) const {
  Backend::Pb pb = C->pullback(f.p, g);
  Mor name = C->compose(f.name, g);
  Mor point = C->compose(f.point, pb.to_f);
  return Fibrancy{pb.to_g, name, point};
}

SquareReport verify_fibrancy(Backend& c, const UniversalMap& um, const Fibrancy& f,
                             const std::vector<Probe>& probes) {
  return verify_pullback_square(c, um.fib_square(f), probes);
}

std::variant<InternalUniverse, Refutation> check_internal_universe(
    Backend& c, const UniversalMap& amb, const UniversalMap& inner,
    const std::vector<Probe>& probes) {
  auto named_el = amb.classify(inner.pi);
  if (!named_el)
    return Refutation{"total projection of the inner universe is not classifiable: " +
                      amb.last_refusal};
  auto named_base = amb.classify(c.bang(inner.u));
  if (!named_base)
    return Refutation{"base of the inner universe is not classifiable: " + amb.last_refusal};
  SquareReport r1 = verify_fibrancy(c, amb, *named_el, probes);
  if (!r1.pass()) return Refutation{"El square failed: " + r1.detail};
  SquareReport r2 = verify_fibrancy(c, amb, *named_base, probes);
  if (!r2.pass()) return Refutation{"base square failed: " + r2.detail};
  return InternalUniverse{*named_el, *named_base};
}

// ---------------------------------------------------------------------------
// codeset classifiers

namespace {

// Enum(n) naming against the code universe; pullback-stable on the nose for
// extension projections
std::optional<Fibrancy> classify_against_codes(Codeset& cs, Mor p) {
  auto& um = cs.code_universe();
  if (auto em = cs.ext_meta(p); em && em->umap == um.umap)
    return Fibrancy{p, em->name, em->var};
  Obj b = cs.cod(p);
  if (!cs.enumerable(b)) return std::nullopt;
  TermArena& a = cs.arena();
  std::vector<TermId> names;
  std::vector<std::vector<TermId>> fibs;
  for (TermId belem : cs.elems(b)) {
    auto fib = cs.fiber_elems(p, belem);
    if (!fib) return std::nullopt;
    names.push_back(a.enum_code(uint32_t(fib->size())));
    fibs.push_back(*fib);
  }
  Mor name = cs.fin_mor(b, um.u, names);
  // point: order-preserving bijection onto the Enum fiber
  Mor point = cs.fin_mor_fn(cs.dom(p), um.tu, [&cs, &a, p, b, &fibs](TermId e) {
    TermId belem = cs.apply(p, e);
    const auto& fib = fibs[cs.elem_index(b, belem)];
    uint32_t idx = uint32_t(std::find(fib.begin(), fib.end(), e) - fib.begin());
    return a.pair(a.enum_code(uint32_t(fib.size())), a.atom(idx));
  });
  return Fibrancy{p, name, point};
}

// size-matched naming against a finite universe: the first declared code with
// the fiber's cardinality
std::optional<Fibrancy> classify_against_finite(Codeset& cs, const std::string& uname, Mor p) {
  const auto* fu = cs.find_universe(uname);
  if (!fu) throw std::runtime_error("unknown finite universe " + uname);
  if (auto em = cs.ext_meta(p); em && em->umap == fu->umap)
    return Fibrancy{p, em->name, em->var};
  Obj b = cs.cod(p);
  if (!cs.enumerable(b)) return std::nullopt;
  TermArena& a = cs.arena();
  std::vector<TermId> names;
  std::vector<std::vector<TermId>> fibs;
  for (TermId belem : cs.elems(b)) {
    auto fib = cs.fiber_elems(p, belem);
    if (!fib) return std::nullopt;
    TermId code = kNoTerm;
    for (TermId c : fu->codes)
      if (cs.el(c).size() == fib->size()) {
        code = c;
        break;
      }
    if (code == kNoTerm) return std::nullopt;  // fiber size has no code
    names.push_back(code);
    fibs.push_back(*fib);
  }
  Mor name = cs.fin_mor(b, fu->u, names);
  Mor point = cs.fin_mor_fn(cs.dom(p), fu->tu, [&cs, &a, p, b, &fibs, &names](TermId e) {
    TermId belem = cs.apply(p, e);
    uint32_t bi = cs.elem_index(b, belem);
    const auto& fib = fibs[bi];
    uint32_t idx = uint32_t(std::find(fib.begin(), fib.end(), e) - fib.begin());
    return a.pair(names[bi], cs.el(names[bi])[idx]);
  });
  return Fibrancy{p, name, point};
}

}  // namespace

UniversalMap code_umap(Codeset& cs) {
  UniversalMap um;
  um.C = &cs;
  um.u = cs.code_universe().u;
  um.tu = cs.code_universe().tu;
  um.pi = cs.code_universe().pi;
  um.label = "code";
  Codeset* p = &cs;
  um.classifier = [p](Mor m) { return classify_against_codes(*p, m); };
  return um;
}

UniversalMap finite_umap(Codeset& cs, const std::string& universe_name) {
  const auto* fu = cs.find_universe(universe_name);
  if (!fu) throw std::runtime_error("unknown finite universe " + universe_name);
  UniversalMap um;
  um.C = &cs;
  um.u = fu->u;
  um.tu = fu->tu;
  um.pi = fu->pi;
  um.label = universe_name;
  Codeset* p = &cs;
  std::string name = universe_name;
  um.classifier = [p, name](Mor m) { return classify_against_finite(*p, name, m); };
  return um;
}

}  // namespace ucat
