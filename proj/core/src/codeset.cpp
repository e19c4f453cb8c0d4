#include "ucat/codeset.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace ucat {

namespace {
std::string mor_tag(Mor f) { return "m" + std::to_string(f); }
}  // namespace

Codeset::Codeset() {
  terminal_ = fin_obj({arena_.star()});
  // ambient code universe
  Obj u = lazy_obj("U", [this](TermId t) { return is_code(t); });
  uint32_t slot = register_umap(u, kNone);
  cu_ = CodeUniverse{u, umaps_[slot].tu, umaps_[slot].pi, slot};
}

// ---------------------------------------------------------------------------
// codes and elements

bool Codeset::is_code(TermId t) {
  auto it = is_code_cache_.find(t);
  if (it != is_code_cache_.end()) return it->second;
  const TermData& d = arena_.data(t);
  bool r = false;
  switch (d.tag) {
    case Tag::Enum:
    case Tag::PBot:
    case Tag::PTop:
      r = true;
      break;
    case Tag::SigmaC:
    case Tag::PiC: {
      TermId base = d.kids[0];
      if (!is_code(base)) break;
      auto entries = arena_.table_entries(t);
      std::vector<TermId> keys;
      for (auto& [k, v] : entries) {
        keys.push_back(k);
        if (!is_code(v)) { keys.clear(); break; }
      }
      if (keys.empty() && !el(base).empty()) break;
      r = keys == el(base);
      break;
    }
    case Tag::IdC:
      r = is_code(d.kids[0]) && is_element_of(d.kids[0], d.kids[1]) &&
          is_element_of(d.kids[0], d.kids[2]);
      break;
    default:
      break;
  }
  is_code_cache_[t] = r;
  return r;
}

const std::vector<TermId>& Codeset::el(TermId code) {
  auto it = el_cache_.find(code);
  if (it != el_cache_.end()) return it->second;
  const TermData& d = arena_.data(code);
  std::vector<TermId> out;
  switch (d.tag) {
    case Tag::Enum:
      for (uint32_t i = 0; i < d.nat; ++i) out.push_back(arena_.atom(i));
      break;
    case Tag::PBot:
      break;
    case Tag::PTop:
      out.push_back(arena_.star());
      break;
    case Tag::SigmaC:
      for (auto& [k, c] : arena_.table_entries(code))
        for (TermId b : el(c)) out.push_back(arena_.pair(k, b));
      break;
    case Tag::PiC: {
      auto entries = arena_.table_entries(code);
      std::vector<std::vector<TermId>> choices;
      for (auto& [k, c] : entries) choices.push_back(el(c));
      bool empty = false;
      for (auto& ch : choices)
        if (ch.empty()) empty = true;
      if (!empty) {
        std::vector<size_t> idx(entries.size(), 0);
        while (true) {
          std::vector<std::pair<TermId, TermId>> tbl;
          for (size_t i = 0; i < entries.size(); ++i)
            tbl.emplace_back(entries[i].first, choices[i][idx[i]]);
          out.push_back(arena_.fun(std::move(tbl)));
          size_t i = entries.size();
          while (i > 0 && ++idx[i - 1] == choices[i - 1].size()) idx[--i] = 0;
          if (i == 0) break;
        }
        if (entries.empty()) assert(out.size() == 1);
      }
      break;
    }
    case Tag::IdC:
      if (d.kids[1] == d.kids[2]) out.push_back(arena_.refl(d.kids[1]));
      break;
    default:
      throw std::runtime_error("el: not a code: " + arena_.show(code));
  }
  canonicalize_elems(arena_, out);
  return el_cache_.emplace(code, std::move(out)).first->second;
}

bool Codeset::is_element_of(TermId code, TermId x) {
  const auto& es = el(code);
  return std::binary_search(es.begin(), es.end(), x, [this](TermId a, TermId b) {
    return arena_.term_less(a, b);
  });
}

// ---------------------------------------------------------------------------
// object / morphism registries

Obj Codeset::intern_obj(ObjData d) {
  if (d.finite) {
    auto it = fin_obj_index_.find(d.elems);
    if (it != fin_obj_index_.end()) return it->second;
    Obj id = Obj(objs_.size());
    fin_obj_index_.emplace(d.elems, id);
    for (uint32_t i = 0; i < d.elems.size(); ++i) d.index[d.elems[i]] = i;
    objs_.push_back(std::move(d));
    return id;
  }
  auto it = lazy_obj_index_.find(d.key);
  if (it != lazy_obj_index_.end()) return it->second;
  Obj id = Obj(objs_.size());
  lazy_obj_index_.emplace(d.key, id);
  objs_.push_back(std::move(d));
  return id;
}

Obj Codeset::fin_obj(std::vector<TermId> elems) {
  canonicalize_elems(arena_, elems);
  ObjData d;
  d.finite = true;
  d.elems = std::move(elems);
  return intern_obj(std::move(d));
}

Obj Codeset::lazy_obj(const std::string& key, std::function<bool(TermId)> member) {
  ObjData d;
  d.finite = false;
  d.key = key;
  d.member = std::move(member);
  return intern_obj(std::move(d));
}

bool Codeset::has_elem(Obj x, TermId e) {
  const ObjData& d = objs_[x];
  if (d.finite) return d.index.count(e) > 0;
  return d.member(e);
}

const std::vector<TermId>& Codeset::elems(Obj x) const {
  const ObjData& d = objs_[x];
  if (!d.finite) throw std::runtime_error("elems: not enumerable: " + d.key);
  return d.elems;
}

uint32_t Codeset::elem_index(Obj x, TermId e) const {
  const ObjData& d = objs_[x];
  auto it = d.index.find(e);
  if (it == d.index.end())
    throw std::runtime_error("elem_index: " + arena_.show(e) + " not in " + show_obj(x));
  return it->second;
}

Mor Codeset::intern_mor(MorData d) {
  if (d.graph_backed) {
    auto key = std::make_tuple(d.dom, d.cod, d.images);
    auto it = fin_mor_index_.find(key);
    if (it != fin_mor_index_.end()) {
      // keep the richest metadata seen for this graph
      Mor m = it->second;
      if (mors_[m].ext.umap == kNone && d.ext.umap != kNone) mors_[m].ext = d.ext;
      if (!mors_[m].fiber && d.fiber) mors_[m].fiber = d.fiber;
      return m;
    }
    Mor id = Mor(mors_.size());
    fin_mor_index_.emplace(std::move(key), id);
    mors_.push_back(std::move(d));
    return id;
  }
  auto key = std::make_tuple(d.dom, d.cod, d.key);
  auto it = lazy_mor_index_.find(key);
  if (it != lazy_mor_index_.end()) {
    Mor m = it->second;
    if (mors_[m].ext.umap == kNone && d.ext.umap != kNone) mors_[m].ext = d.ext;
    if (!mors_[m].fiber && d.fiber) mors_[m].fiber = d.fiber;
    return m;
  }
  Mor id = Mor(mors_.size());
  lazy_mor_index_.emplace(std::move(key), id);
  mors_.push_back(std::move(d));
  return id;
}

Mor Codeset::fin_mor(Obj dom, Obj cod, const std::vector<TermId>& images) {
  const ObjData& dd = objs_[dom];
  if (!dd.finite) throw std::runtime_error("fin_mor: lazy domain");
  if (images.size() != dd.elems.size())
    throw std::runtime_error("fin_mor: image count mismatch");
  for (TermId e : images)
    if (!has_elem(cod, e))
      throw std::runtime_error("fin_mor: image " + arena_.show(e) + " not in codomain " +
                               show_obj(cod));
  MorData d;
  d.dom = dom;
  d.cod = cod;
  d.graph_backed = true;
  d.images = images;
  return intern_mor(std::move(d));
}

Mor Codeset::fin_mor_fn(Obj dom, Obj cod, const std::function<TermId(TermId)>& fn) {
  std::vector<TermId> images;
  for (TermId e : elems(dom)) images.push_back(fn(e));
  return fin_mor(dom, cod, images);
}

Mor Codeset::lazy_mor(Obj dom, Obj cod, const std::string& key,
                      std::function<TermId(TermId)> fn) {
  if (objs_[dom].finite) return fin_mor_fn(dom, cod, fn);
  MorData d;
  d.dom = dom;
  d.cod = cod;
  d.graph_backed = false;
  d.key = key;
  d.fn = std::move(fn);
  return intern_mor(std::move(d));
}

void Codeset::set_fiber_fn(Mor f,
                           std::function<std::optional<std::vector<TermId>>(TermId)> fib) {
  mors_[f].fiber = std::move(fib);
}

TermId Codeset::apply(Mor f, TermId e) {
  const MorData& d = mors_[f];
  if (d.graph_backed) return d.images[elem_index(d.dom, e)];
  return d.fn(e);
}

std::optional<std::vector<TermId>> Codeset::fiber_elems(Mor f, TermId e) {
  const MorData& d = mors_[f];
  if (d.graph_backed) {
    std::vector<TermId> out;
    const auto& es = objs_[d.dom].elems;
    for (size_t i = 0; i < es.size(); ++i)
      if (d.images[i] == e) out.push_back(es[i]);
    return out;  // already canonical: es is canonical and filter preserves order
  }
  if (d.fiber) return d.fiber(e);
  return std::nullopt;
}

Mor Codeset::point(Obj x, TermId e) {
  if (!has_elem(x, e))
    throw std::runtime_error("point: " + arena_.show(e) + " not in " + show_obj(x));
  MorData d;
  d.dom = terminal_;
  d.cod = x;
  d.graph_backed = true;
  d.images = {e};
  return intern_mor(std::move(d));
}

TermId Codeset::point_elem(Mor pt) const {
  const MorData& d = mors_[pt];
  if (d.dom != terminal_ || !d.graph_backed)
    throw std::runtime_error("point_elem: not a point");
  return d.images[0];
}

// ---------------------------------------------------------------------------
// Backend interface

Obj Codeset::dom(Mor f) const { return mors_[f].dom; }
Obj Codeset::cod(Mor f) const { return mors_[f].cod; }

Mor Codeset::identity(Obj x) {
  const ObjData& d = objs_[x];
  if (d.finite) return fin_mor(x, x, d.elems);
  MorData m;
  m.dom = x;
  m.cod = x;
  m.graph_backed = false;
  m.key = "id";
  m.fn = [](TermId t) { return t; };
  m.fiber = [](TermId t) { return std::optional<std::vector<TermId>>({{t}}); };
  return intern_mor(std::move(m));
}

Mor Codeset::compose(Mor g, Mor f) {
  const MorData& fd = mors_[f];
  const MorData& gd = mors_[g];
  if (fd.cod != gd.dom)
    throw std::runtime_error("compose: type mismatch " + show_mor(g) + " . " + show_mor(f));
  if (f == identity(fd.dom)) return g;
  if (g == identity(gd.dom)) return f;
  if (fd.graph_backed) {
    std::vector<TermId> images;
    images.reserve(fd.images.size());
    for (TermId e : fd.images) images.push_back(apply(g, e));
    return fin_mor(fd.dom, gd.cod, images);
  }
  MorData d;
  d.dom = fd.dom;
  d.cod = gd.cod;
  d.graph_backed = false;
  d.key = "comp(" + mor_tag(g) + "," + mor_tag(f) + ")";
  d.fn = [this, g, f](TermId t) { return apply(g, apply(f, t)); };
  // fibers compose when both factors have them
  d.fiber = [this, g, f](TermId t) -> std::optional<std::vector<TermId>> {
    auto outer = fiber_elems(g, t);
    if (!outer) return std::nullopt;
    std::vector<TermId> out;
    for (TermId m : *outer) {
      auto inner = fiber_elems(f, m);
      if (!inner) return std::nullopt;
      out.insert(out.end(), inner->begin(), inner->end());
    }
    canonicalize_elems(arena_, out);
    return out;
  };
  return intern_mor(std::move(d));
}

Obj Codeset::terminal() { return terminal_; }

Mor Codeset::bang(Obj x) {
  const ObjData& d = objs_[x];
  TermId star = arena_.star();
  if (d.finite) {
    std::vector<TermId> images(d.elems.size(), star);
    return fin_mor(x, terminal_, images);
  }
  MorData m;
  m.dom = x;
  m.cod = terminal_;
  m.graph_backed = false;
  m.key = "bang";
  m.fn = [star](TermId) { return star; };
  return intern_mor(std::move(m));
}

bool Codeset::enumerable(Obj x) const { return objs_[x].finite; }

std::optional<size_t> Codeset::size_of(Obj x) const {
  const ObjData& d = objs_[x];
  if (!d.finite) return std::nullopt;
  return d.elems.size();
}

std::vector<Mor> Codeset::points(Obj x) {
  std::vector<Mor> out;
  for (TermId e : elems(x)) out.push_back(point(x, e));
  return out;
}

std::vector<Mor> Codeset::hom(Obj a, Obj b) {
  const auto& ea = elems(a);
  const auto& eb = elems(b);
  if (ea.empty()) {
    return {fin_mor(a, b, {})};
  }
  if (eb.empty()) return {};
  double total = 1;
  for (size_t i = 0; i < ea.size(); ++i) total *= double(eb.size());
  if (total > double(hom_budget))
    throw std::runtime_error("hom: |" + show_obj(b) + "|^|" + show_obj(a) +
                             "| exceeds enumeration budget");
  std::vector<Mor> out;
  std::vector<size_t> idx(ea.size(), 0);
  while (true) {
    std::vector<TermId> images;
    images.reserve(ea.size());
    for (size_t i = 0; i < ea.size(); ++i) images.push_back(eb[idx[i]]);
    out.push_back(fin_mor(a, b, images));
    size_t i = ea.size();
    while (i > 0 && ++idx[i - 1] == eb.size()) idx[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

Mor Codeset::mor_from_point_images(Obj a, Obj b, const std::vector<Mor>& images) {
  std::vector<TermId> imgs;
  imgs.reserve(images.size());
  for (Mor pt : images) imgs.push_back(point_elem(pt));
  return fin_mor(a, b, imgs);
}

std::optional<Codeset::ExtMeta> Codeset::ext_meta(Mor f) const {
  if (mors_[f].ext.umap == kNone) return std::nullopt;
  return mors_[f].ext;
}

TermId Codeset::apex_elem_of(Mor f, Mor g, TermId a, TermId b) {
  pullback(f, g);
  return apex_elem(pb_cache_.at(std::make_pair(f, g)), a, b);
}

// ---------------------------------------------------------------------------
// extensions and pullbacks

uint32_t Codeset::register_umap(Obj u, Obj /*unused*/) {
  uint32_t slot = uint32_t(umaps_.size());
  umaps_.push_back(UmapRec{u, kNone, kNone});
  Ext e = extend_umap(slot, identity(u));
  umaps_[slot].tu = e.obj;
  umaps_[slot].pi = e.proj;
  return slot;
}

Codeset::Ext Codeset::extend_umap(uint32_t umap, Mor name) {
  Obj base = dom(name);
  Obj u = umaps_[umap].u;
  if (cod(name) != u) throw std::runtime_error("extend: name does not target the universe");
  const ObjData& bd = objs_[base];
  Obj obj;
  if (bd.finite) {
    std::vector<TermId> es;
    for (TermId g : bd.elems)
      for (TermId x : el(apply(name, g))) es.push_back(arena_.pair(g, x));
    obj = fin_obj(std::move(es));
  } else {
    std::string key = "ext(u" + std::to_string(umap) + "," + mor_tag(name) + ")";
    obj = lazy_obj(key, [this, base, name](TermId t) {
      if (arena_.tag(t) != Tag::Pair) return false;
      TermId g = arena_.fst(t), x = arena_.snd(t);
      return has_elem(base, g) && is_element_of(apply(name, g), x);
    });
  }
  // projection, with finite fibers and split metadata
  Mor proj;
  {
    std::function<TermId(TermId)> fn = [this](TermId t) { return arena_.fst(t); };
    if (objs_[obj].finite) {
      proj = fin_mor_fn(obj, base, fn);
    } else {
      MorData d;
      d.dom = obj;
      d.cod = base;
      d.graph_backed = false;
      d.key = "extproj";
      d.fn = fn;
      proj = intern_mor(std::move(d));
    }
    set_fiber_fn(proj, [this, name](TermId g) -> std::optional<std::vector<TermId>> {
      std::vector<TermId> out;
      for (TermId x : el(apply(name, g))) out.push_back(arena_.pair(g, x));
      return out;
    });
  }
  // the generic point: (g, x) -> (N g, x) in tU
  Mor var;
  {
    std::function<TermId(TermId)> fn = [this, name](TermId t) {
      return arena_.pair(apply(name, arena_.fst(t)), arena_.snd(t));
    };
    Obj tu = (umaps_[umap].tu == kNone) ? obj : umaps_[umap].tu;  // bootstrap: tU itself
    if (objs_[obj].finite) {
      var = fin_mor_fn(obj, tu, fn);
    } else {
      MorData d;
      d.dom = obj;
      d.cod = tu;
      d.graph_backed = false;
      d.key = "extvar(u" + std::to_string(umap) + "," + mor_tag(name) + ")";
      d.fn = fn;
      var = intern_mor(std::move(d));
    }
  }
  // attach metadata to proj
  mors_[proj].ext = ExtMeta{umap, name, var};
  return Ext{obj, proj, var};
}

TermId Codeset::apex_elem(const PbInfo& info, TermId a, TermId b) {
  // a in dom(f), b in dom(g); returns the apex element mapping to (a, b)
  switch (info.kind) {
    case PbInfo::ExtF:
      // apex = ext along N.g over dom(g): elements Pair(b, x), a = (N(g b), x)
      return arena_.pair(b, arena_.snd(a));
    case PbInfo::ExtG:
      return arena_.pair(a, arena_.snd(b));
    case PbInfo::IdF:
      return b;
    case PbInfo::IdG:
      return a;
    case PbInfo::Generic:
      return arena_.pair(a, b);
  }
  return kNoTerm;
}

Backend::Pb Codeset::pullback(Mor f, Mor g) {
  if (cod(f) != cod(g)) throw std::runtime_error("pullback: codomain mismatch");
  auto key = std::make_pair(f, g);
  auto it = pb_cache_.find(key);
  if (it != pb_cache_.end()) return it->second.pb;

  PbInfo info;
  info.f = f;
  info.g = g;
  // pulling back along an identity returns the other leg on the nose
  if (f == identity(cod(f))) {
    info.kind = PbInfo::IdF;
    info.pb = Pb{dom(g), g, identity(dom(g))};
    pb_cache_.emplace(key, info);
    return info.pb;
  }
  if (g == identity(cod(g))) {
    info.kind = PbInfo::IdG;
    info.pb = Pb{dom(f), identity(dom(f)), f};
    pb_cache_.emplace(key, info);
    return info.pb;
  }
  auto mk_ext_side = [this](Mor ext_proj_of, Mor along, const ExtMeta& em, Mor other)
      -> std::pair<Ext, Mor> {
    // ext_proj_of = the extension projection being pulled back, `along` the
    // other cospan leg; returns the new extension plus the leg into
    // dom(ext_proj_of): (b, x) -> (along b, x)
    Mor ng = compose(em.name, along);
    Ext e = extend_umap(em.umap, ng);
    // pulling the universal map itself back along a name: the leg is the
    // generic point of the new extension, on the nose
    if (em.name == identity(umaps_[em.umap].u)) return {e, e.var};
    std::function<TermId(TermId)> fn = [this, along](TermId t) {
      return arena_.pair(apply(along, arena_.fst(t)), arena_.snd(t));
    };
    Mor leg;
    if (objs_[e.obj].finite) {
      leg = fin_mor_fn(e.obj, dom(ext_proj_of), fn);
    } else {
      MorData d;
      d.dom = e.obj;
      d.cod = dom(ext_proj_of);
      d.graph_backed = false;
      d.key = "pbext_leg(" + mor_tag(ext_proj_of) + "," + mor_tag(along) + ")";
      d.fn = fn;
      leg = intern_mor(std::move(d));
    }
    set_fiber_fn(leg, [this, along](TermId t) -> std::optional<std::vector<TermId>> {
      auto gf = fiber_elems(along, arena_.fst(t));
      if (!gf) return std::nullopt;
      std::vector<TermId> out;
      for (TermId bb : *gf) out.push_back(arena_.pair(bb, arena_.snd(t)));
      canonicalize_elems(arena_, out);
      return out;
    });
    (void)other;
    return {e, leg};
  };
  if (auto em = ext_meta(f)) {
    auto [e, leg] = mk_ext_side(f, g, *em, g);
    info.kind = PbInfo::ExtF;
    info.pb = Pb{e.obj, leg, e.proj};
    pb_cache_.emplace(key, info);
    return info.pb;
  }
  if (auto em = ext_meta(g)) {
    auto [e, leg] = mk_ext_side(g, f, *em, f);
    info.kind = PbInfo::ExtG;
    info.pb = Pb{e.obj, e.proj, leg};
    pb_cache_.emplace(key, info);
    return info.pb;
  }

  // generic pair apex
  const ObjData& ad = objs_[dom(f)];
  const ObjData& bd = objs_[dom(g)];
  Obj apex;
  if (ad.finite && bd.finite) {
    std::vector<TermId> es;
    for (TermId a : ad.elems)
      for (TermId b : bd.elems)
        if (apply(f, a) == apply(g, b)) es.push_back(arena_.pair(a, b));
    apex = fin_obj(std::move(es));
  } else if (ad.finite) {
    std::vector<TermId> es;
    for (TermId a : ad.elems) {
      auto fib = fiber_elems(g, apply(f, a));
      if (!fib)
        throw std::runtime_error("pullback: lazy leg without fibers: " + show_mor(g));
      for (TermId b : *fib) es.push_back(arena_.pair(a, b));
    }
    apex = fin_obj(std::move(es));
  } else if (bd.finite) {
    std::vector<TermId> es;
    for (TermId b : bd.elems) {
      auto fib = fiber_elems(f, apply(g, b));
      if (!fib)
        throw std::runtime_error("pullback: lazy leg without fibers: " + show_mor(f));
      for (TermId a : *fib) es.push_back(arena_.pair(a, b));
    }
    apex = fin_obj(std::move(es));
  } else {
    Obj da = dom(f), db = dom(g);
    apex = lazy_obj("pb(" + mor_tag(f) + "," + mor_tag(g) + ")",
                    [this, f, g, da, db](TermId t) {
                      if (arena_.tag(t) != Tag::Pair) return false;
                      TermId a = arena_.fst(t), b = arena_.snd(t);
                      return has_elem(da, a) && has_elem(db, b) &&
                             apply(f, a) == apply(g, b);
                    });
  }
  Mor tof, tog;
  {
    std::function<TermId(TermId)> fn1 = [this](TermId t) { return arena_.fst(t); };
    std::function<TermId(TermId)> fn2 = [this](TermId t) { return arena_.snd(t); };
    if (objs_[apex].finite) {
      tof = fin_mor_fn(apex, dom(f), fn1);
      tog = fin_mor_fn(apex, dom(g), fn2);
    } else {
      MorData d1;
      d1.dom = apex;
      d1.cod = dom(f);
      d1.graph_backed = false;
      d1.key = "pb_tof(" + mor_tag(f) + "," + mor_tag(g) + ")";
      d1.fn = fn1;
      tof = intern_mor(std::move(d1));
      MorData d2;
      d2.dom = apex;
      d2.cod = dom(g);
      d2.graph_backed = false;
      d2.key = "pb_tog(" + mor_tag(f) + "," + mor_tag(g) + ")";
      d2.fn = fn2;
      tog = intern_mor(std::move(d2));
    }
    set_fiber_fn(tof, [this, f, g](TermId a) -> std::optional<std::vector<TermId>> {
      auto fib = fiber_elems(g, apply(f, a));
      if (!fib) return std::nullopt;
      std::vector<TermId> out;
      for (TermId b : *fib) out.push_back(arena_.pair(a, b));
      return out;
    });
    set_fiber_fn(tog, [this, f, g](TermId b) -> std::optional<std::vector<TermId>> {
      auto fib = fiber_elems(f, apply(g, b));
      if (!fib) return std::nullopt;
      std::vector<TermId> out;
      for (TermId a : *fib) out.push_back(arena_.pair(a, b));
      return out;
    });
  }
  info.kind = PbInfo::Generic;
  info.pb = Pb{apex, tof, tog};
  pb_cache_.emplace(key, info);
  return info.pb;
}

Mor Codeset::pb_induced(Mor f, Mor g, Mor u, Mor v) {
  // u : Z -> dom(f), v : Z -> dom(g), f u = g v
  Pb pb = pullback(f, g);
  Obj z = dom(u);
  if (dom(v) != z) throw std::runtime_error("pb_induced: cone domain mismatch");
  if (objs_[z].finite) {
    for (TermId e : elems(z))
      if (apply(f, apply(u, e)) != apply(g, apply(v, e)))
        throw std::runtime_error("pb_induced: cone does not commute at " + arena_.show(e));
  }
  // mediate by legs: the apex element is reconstructible from the cone images
  const PbInfo info = pb_cache_.at(std::make_pair(f, g));
  std::function<TermId(TermId)> fn = [this, u, v, info](TermId e) {
    return apex_elem(info, apply(u, e), apply(v, e));
  };
  if (objs_[z].finite) return fin_mor_fn(z, pb.apex, fn);
  MorData d;
  d.dom = z;
  d.cod = pb.apex;
  d.graph_backed = false;
  d.key = "ind(" + mor_tag(f) + "," + mor_tag(g) + "," + mor_tag(u) + "," + mor_tag(v) + ")";
  d.fn = fn;
  return intern_mor(std::move(d));
}

std::optional<std::vector<Mor>> Codeset::fiber_points(Mor p, Mor pt) {
  auto fib = fiber_elems(p, point_elem(pt));
  if (!fib) return std::nullopt;
  std::vector<Mor> out;
  for (TermId e : *fib) out.push_back(point(dom(p), e));
  return out;
}

// ---------------------------------------------------------------------------
// pushforwards

bool Codeset::has_pushforward(Mor p) {
  // needs enumerable fibers; graph-backed or fiber-registered
  return mors_[p].graph_backed || bool(mors_[p].fiber);
}

Backend::Pf Codeset::pushforward(Mor p, Mor x) {
  auto key = std::make_pair(p, x);
  auto it = pf_cache_.find(key);
  if (it != pf_cache_.end()) return it->second;
  if (cod(x) != dom(p)) throw std::runtime_error("pushforward: x is not over dom(p)");
  if (!has_pushforward(p)) throw std::runtime_error("pushforward: p has no enumerable fibers");
  Obj b = cod(p);
  Obj xo = dom(x);

  // fiber of the result over b: all section tables e -> x-elem
  auto sections = [this, p, x](TermId belem) -> std::optional<std::vector<TermId>> {
    auto pfib = fiber_elems(p, belem);
    if (!pfib) return std::nullopt;
    std::vector<std::vector<TermId>> choices;
    for (TermId e : *pfib) {
      auto xf = fiber_elems(x, e);
      if (!xf) return std::nullopt;
      if (xf->empty()) return std::vector<TermId>{};
      choices.push_back(*xf);
    }
    std::vector<TermId> out;
    std::vector<size_t> idx(pfib->size(), 0);
    while (true) {
      std::vector<std::pair<TermId, TermId>> tbl;
      for (size_t i = 0; i < pfib->size(); ++i)
        tbl.emplace_back((*pfib)[i], choices[i][idx[i]]);
      out.push_back(arena_.pair(belem, arena_.fun(std::move(tbl))));
      size_t i = pfib->size();
      while (i > 0 && ++idx[i - 1] == choices[i - 1].size()) idx[--i] = 0;
      if (i == 0) break;
    }
    canonicalize_elems(arena_, out);
    return out;
  };

  Obj total;
  const ObjData& bd = objs_[b];
  if (bd.finite) {
    std::vector<TermId> es;
    for (TermId belem : bd.elems) {
      auto s = sections(belem);
      if (!s)
        throw std::runtime_error("pushforward: section fibers not enumerable over " +
                                 arena_.show(belem));
      es.insert(es.end(), s->begin(), s->end());
    }
    total = fin_obj(std::move(es));
  } else {
    total = lazy_obj(
        "pf(" + mor_tag(p) + "," + mor_tag(x) + ")", [this, b, p, x](TermId t) {
          if (arena_.tag(t) != Tag::Pair) return false;
          TermId belem = arena_.fst(t), tbl = arena_.snd(t);
          if (!has_elem(b, belem) || arena_.tag(tbl) != Tag::Fun) return false;
          auto pfib = fiber_elems(p, belem);
          if (!pfib) return false;
          auto entries = arena_.table_entries(tbl);
          if (entries.size() != pfib->size()) return false;
          for (size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].first != (*pfib)[i]) return false;
            TermId xe = entries[i].second;
            if (!has_elem(dom(x), xe) || apply(x, xe) != entries[i].first) return false;
          }
          return true;
        });
  }
  Mor proj;
  {
    std::function<TermId(TermId)> fn = [this](TermId t) { return arena_.fst(t); };
    if (objs_[total].finite) {
      proj = fin_mor_fn(total, b, fn);
    } else {
      MorData d;
      d.dom = total;
      d.cod = b;
      d.graph_backed = false;
      d.key = "pfproj(" + mor_tag(p) + "," + mor_tag(x) + ")";
      d.fn = fn;
      proj = intern_mor(std::move(d));
    }
    set_fiber_fn(proj, sections);
  }
  Pb star = pullback(proj, p);
  // counit: apex -> X, via table lookup at the E-component
  Mor counit;
  {
    Mor tof = star.to_f;  // apex -> p_*X
    Mor tog = star.to_g;  // apex -> E
    std::function<TermId(TermId)> fn = [this, tof, tog](TermId t) {
      TermId w = apply(tof, t);
      TermId e = apply(tog, t);
      auto v = arena_.table_get(arena_.snd(w), e);
      if (!v) throw std::runtime_error("counit: section table missing key");
      return *v;
    };
    if (objs_[star.apex].finite) {
      counit = fin_mor_fn(star.apex, xo, fn);
    } else {
      MorData d;
      d.dom = star.apex;
      d.cod = xo;
      d.graph_backed = false;
      d.key = "pfcounit(" + mor_tag(p) + "," + mor_tag(x) + ")";
      d.fn = fn;
      counit = intern_mor(std::move(d));
    }
  }
  Pf pf{p, x, total, proj, counit, star};
  pf_cache_.emplace(key, pf);
  return pf;
}

Mor Codeset::pf_transpose(const Pf& pf, Mor y, Mor f) {
  // y : Y -> B; f : pullback(y, p).apex -> X over E; result: Y -> p_*X over B
  Pb pb = pullback(y, pf.p);
  if (dom(f) != pb.apex) throw std::runtime_error("pf_transpose: wrong domain");
  const PbInfo info = pb_cache_.at(std::make_pair(y, pf.p));
  Mor p = pf.p;
  std::function<TermId(TermId)> fn = [this, y, p, f, info](TermId yelem) {
    TermId belem = apply(y, yelem);
    auto pfib = fiber_elems(p, belem);
    if (!pfib) throw std::runtime_error("pf_transpose: fiber not enumerable");
    std::vector<std::pair<TermId, TermId>> tbl;
    for (TermId e : *pfib) {
      TermId a = apex_elem(info, yelem, e);
      tbl.emplace_back(e, apply(f, a));
    }
    return arena_.pair(belem, arena_.fun(std::move(tbl)));
  };
  Obj yo = dom(y);
  Mor out;
  if (objs_[yo].finite) {
    out = fin_mor_fn(yo, pf.total, fn);
  } else {
    MorData d;
    d.dom = yo;
    d.cod = pf.total;
    d.graph_backed = false;
    d.key = "pftr(" + mor_tag(pf.p) + "," + mor_tag(pf.x) + "," + mor_tag(y) + "," +
            mor_tag(f) + ")";
    d.fn = fn;
    out = intern_mor(std::move(d));
  }
  // fibers: the y-fiber over the base point, filtered by transpose value
  set_fiber_fn(out, [this, y, fn](TermId t) -> std::optional<std::vector<TermId>> {
    auto yfib = fiber_elems(y, arena_.fst(t));
    if (!yfib) return std::nullopt;
    std::vector<TermId> res;
    for (TermId ye : *yfib)
      if (fn(ye) == t) res.push_back(ye);
    return res;
  });
  return out;
}

Mor Codeset::pf_untranspose(const Pf& pf, Mor y, Mor g) {
  // g : Y -> p_*X over B; result: pullback(y, p).apex -> X over E
  Pb pb = pullback(y, pf.p);
  Mor toy = pb.to_f;
  Mor toe = pb.to_g;
  std::function<TermId(TermId)> fn = [this, g, toy, toe](TermId t) {
    TermId w = apply(g, apply(toy, t));
    TermId e = apply(toe, t);
    auto v = arena_.table_get(arena_.snd(w), e);
    if (!v) throw std::runtime_error("pf_untranspose: section table missing key");
    return *v;
  };
  if (objs_[pb.apex].finite) return fin_mor_fn(pb.apex, dom(pf.x), fn);
  MorData d;
  d.dom = pb.apex;
  d.cod = dom(pf.x);
  d.graph_backed = false;
  d.key = "pfuntr(" + mor_tag(pf.p) + "," + mor_tag(pf.x) + "," + mor_tag(y) + "," + mor_tag(g) + ")";
  d.fn = fn;
  return intern_mor(std::move(d));
}

// ---------------------------------------------------------------------------
// coproducts: tagged unions with Atom-index wrappers

Backend::Coprod Codeset::coproduct(const std::vector<Obj>& parts) {
  std::vector<TermId> es;
  for (size_t i = 0; i < parts.size(); ++i) {
    TermId tag = arena_.atom(uint32_t(i));
    for (TermId e : elems(parts[i])) es.push_back(arena_.pair(tag, e));
  }
  Obj obj = fin_obj(std::move(es));
  Coprod cp;
  cp.obj = obj;
  for (size_t i = 0; i < parts.size(); ++i) {
    TermId tag = arena_.atom(uint32_t(i));
    cp.inj.push_back(fin_mor_fn(parts[i], obj, [this, tag](TermId e) {
      return arena_.pair(tag, e);
    }));
  }
  return cp;
}

Mor Codeset::copair(const Coprod& cp, const std::vector<Mor>& legs, Obj target) {
  return fin_mor_fn(cp.obj, target, [this, &legs](TermId e) {
    uint32_t tag = arena_.data(arena_.fst(e)).nat;
    return apply(legs.at(tag), arena_.snd(e));
  });
}

// ---------------------------------------------------------------------------

std::string Codeset::show_obj(Obj x) const {
  const ObjData& d = objs_[x];
  if (!d.finite) return "#" + d.key;
  if (d.elems.size() <= 4) {
    std::string s = "{";
    for (size_t i = 0; i < d.elems.size(); ++i) {
      if (i) s += ", ";
      s += arena_.show(d.elems[i]);
    }
    return s + "}";
  }
  return "{|" + std::to_string(d.elems.size()) + "|}";
}

std::string Codeset::show_mor(Mor f) const {
  const MorData& d = mors_[f];
  std::string s = "m" + std::to_string(f) + ":" + show_obj(d.dom) + "->" + show_obj(d.cod);
  return s;
}

// ---------------------------------------------------------------------------
// universes

const Codeset::FiniteUniverse& Codeset::make_finite_universe(
    const std::string& name, std::vector<TermId> codes,
    std::function<TermId(TermId, TermId, TermId)> id_code) {
  auto it = universe_index_.find(name);
  if (it != universe_index_.end()) return universes_[it->second];
  for (TermId c : codes)
    if (!is_code(c))
      throw std::runtime_error("universe " + name + ": not a code: " + arena_.show(c));
  // well-formedness of the Id assignment: strict-Id discipline. A universe
  // may be declared without one; Id-dependent structures then refuse it.
  if (id_code)
  for (TermId c : codes)
    for (TermId x : el(c))
      for (TermId y : el(c)) {
        TermId idc = id_code(c, x, y);
        bool found = std::find(codes.begin(), codes.end(), idc) != codes.end();
        if (!found)
          throw std::runtime_error("universe " + name + ": Id code escapes the universe");
        size_t n = el(idc).size();
        if (x == y ? n != 1 : n != 0)
          throw std::runtime_error("universe " + name + ": Id code of wrong size at " +
                                   arena_.show(x) + ", " + arena_.show(y));
      }
  FiniteUniverse fu;
  fu.name = name;
  fu.codes = codes;
  fu.u = fin_obj(codes);
  uint32_t slot = register_umap(fu.u, kNone);
  fu.umap = slot;
  fu.tu = umaps_[slot].tu;
  fu.pi = umaps_[slot].pi;
  fu.id_code = std::move(id_code);
  universes_.push_back(std::move(fu));
  universe_index_[name] = universes_.size() - 1;
  return universes_.back();
}

const Codeset::FiniteUniverse& Codeset::prop_universe() {
  TermId bot = arena_.pbot(), top = arena_.ptop();
  return make_finite_universe("prop", {bot, top}, [bot, top](TermId, TermId x, TermId y) {
    return x == y ? top : bot;
  });
}

const Codeset::FiniteUniverse* Codeset::find_universe(const std::string& name) const {
  auto it = universe_index_.find(name);
  if (it == universe_index_.end()) return nullptr;
  return &universes_[it->second];
}

std::optional<Mor> Codeset::enum_name(Mor p) {
  // name an arbitrary finite-fibered map against the ambient code universe
  if (auto em = ext_meta(p); em && em->umap == cu_.umap) return em->name;
  Obj b = cod(p);
  if (!objs_[b].finite) return std::nullopt;
  std::vector<TermId> images;
  for (TermId belem : elems(b)) {
    auto fib = fiber_elems(p, belem);
    if (!fib) return std::nullopt;
    images.push_back(arena_.enum_code(uint32_t(fib->size())));
  }
  return fin_mor(b, cu_.u, images);
}

}  // namespace ucat
