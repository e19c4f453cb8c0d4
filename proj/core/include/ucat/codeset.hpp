#pragma once

#include "ucat/backend.hpp"
#include "ucat/term.hpp"

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <unordered_map>

namespace ucat {

// The category of computable sets. Elements are hash-consed canonical terms.
// Objects are either finite (explicit canonical element list) or lazy
// (decidable membership, no enumeration). Morphisms on finite domains are
// stored as graphs, making extensional equality coincide with handle
// equality; morphisms on lazy domains are keyed syntactically.
class Codeset : public Backend {
 public:
  Codeset();

  TermArena& arena() { return arena_; }
  const TermArena& arena() const { return arena_; }

  // decoding of codes to canonical element lists
  const std::vector<TermId>& el(TermId code);
  bool is_code(TermId t);
  bool is_element_of(TermId code, TermId x);

  // objects
  Obj fin_obj(std::vector<TermId> elems);
  Obj lazy_obj(const std::string& key, std::function<bool(TermId)> member);
  bool has_elem(Obj x, TermId e);
  const std::vector<TermId>& elems(Obj x) const;
  uint32_t elem_index(Obj x, TermId e) const;

  // morphisms
  Mor fin_mor(Obj dom, Obj cod, const std::vector<TermId>& images);
  Mor fin_mor_fn(Obj dom, Obj cod, const std::function<TermId(TermId)>& fn);
  Mor lazy_mor(Obj dom, Obj cod, const std::string& key,
               std::function<TermId(TermId)> fn);
  void set_fiber_fn(Mor f, std::function<std::optional<std::vector<TermId>>(TermId)> fib);
  TermId apply(Mor f, TermId e);
  std::optional<std::vector<TermId>> fiber_elems(Mor f, TermId e);
  Mor point(Obj x, TermId e);
  TermId point_elem(Mor pt) const;  // pt : 1 -> X

  // the ambient universe of codes: pi : tU -> U, lazily enumerated
  struct CodeUniverse {
    Obj u, tu;
    Mor pi;
    uint32_t umap;  // registry slot used by the split-pullback discipline
  };
  const CodeUniverse& code_universe() const { return cu_; }

  // a finite universe carved out of the code universe: a code list plus an
  // Id-assignment making a pre-Id square; decl_order is kept for the
  // deterministic size-matched naming rule
  struct FiniteUniverse {
    std::string name;
    std::vector<TermId> codes;  // declaration order
    Obj u, tu;
    Mor pi;
    uint32_t umap;
    std::function<TermId(TermId, TermId, TermId)> id_code;  // (A, x, y) -> code
  };
  // id_code must satisfy: el(id_code(A,x,y)) singleton iff x == y else empty
  const FiniteUniverse& make_finite_universe(
      const std::string& name, std::vector<TermId> codes,
      std::function<TermId(TermId, TermId, TermId)> id_code);
  const FiniteUniverse& prop_universe();
  const FiniteUniverse* find_universe(const std::string& name) const;

  // raw fiber elements of the umap's pi over a code (always el(code))
  // extension along a name N : G -> U; apex elements are Pair(g, x) with
  // x in el(N(g)); proj carries the split metadata
  struct Ext {
    Obj obj;
    Mor proj, var;
  };
  Ext extend_umap(uint32_t umap, Mor name);

  // Backend interface
  Obj dom(Mor f) const override;
  Obj cod(Mor f) const override;
  Mor identity(Obj x) override;
  Mor compose(Mor g, Mor f) override;
  Obj terminal() override;
  Mor bang(Obj x) override;
  bool enumerable(Obj x) const override;
  std::optional<size_t> size_of(Obj x) const override;
  std::vector<Mor> points(Obj x) override;
  std::vector<Mor> hom(Obj a, Obj b) override;
  Mor mor_from_point_images(Obj a, Obj b, const std::vector<Mor>& images) override;
  Pb pullback(Mor f, Mor g) override;
  Mor pb_induced(Mor f, Mor g, Mor u, Mor v) override;
  std::optional<std::vector<Mor>> fiber_points(Mor p, Mor pt) override;
  bool has_pushforward(Mor p) override;
  Pf pushforward(Mor p, Mor x) override;
  Mor pf_transpose(const Pf& pf, Mor y, Mor f) override;
  Mor pf_untranspose(const Pf& pf, Mor y, Mor g) override;
  bool has_coproducts() const override { return true; }
  Coprod coproduct(const std::vector<Obj>& parts) override;
  Mor copair(const Coprod& cp, const std::vector<Mor>& legs, Obj target) override;
  std::string show_obj(Obj x) const override;
  std::string show_mor(Mor f) const override;

  // ext metadata: f is the projection of an extension (umap, name)
  struct ExtMeta {
    uint32_t umap = kNone;
    Mor name = kNone;
    Mor var = kNone;
  };
  std::optional<ExtMeta> ext_meta(Mor f) const;

  // reconstruct the pullback(f, g)-apex element with the given leg values
  TermId apex_elem_of(Mor f, Mor g, TermId a, TermId b);
  // code-universe naming of an arbitrary finite-fibered map over a finite (or
  // ext-registered) base; fibers are coded as Enum(n) with order-preserving
  // points
  std::optional<Mor> enum_name(Mor p);

  uint64_t hom_budget = 1u << 22;  // guard against accidental blowups

 private:
  struct ObjData {
    bool finite = true;
    std::vector<TermId> elems;
    std::unordered_map<TermId, uint32_t> index;
    std::string key;
    std::function<bool(TermId)> member;
  };
  struct MorData {
    Obj dom, cod;
    bool graph_backed = false;
    std::vector<TermId> images;  // parallel to elems(dom)
    std::string key;             // lazy-domain identity
    std::function<TermId(TermId)> fn;
    std::function<std::optional<std::vector<TermId>>(TermId)> fiber;
    ExtMeta ext;
  };
  struct PbInfo {
    enum Kind { ExtF, ExtG, IdF, IdG, Generic } kind;
    Pb pb;
    Mor f, g;
  };

  Obj intern_obj(ObjData d);
  Mor intern_mor(MorData d);
  TermId apex_elem(const PbInfo& info, TermId a, TermId b);

  TermArena arena_;
  std::deque<ObjData> objs_;
  std::deque<MorData> mors_;
  std::map<std::vector<TermId>, Obj> fin_obj_index_;
  std::unordered_map<std::string, Obj> lazy_obj_index_;
  std::map<std::tuple<Obj, Obj, std::vector<TermId>>, Mor> fin_mor_index_;
  std::map<std::tuple<Obj, Obj, std::string>, Mor> lazy_mor_index_;
  std::map<std::pair<Mor, Mor>, PbInfo> pb_cache_;
  std::map<std::pair<Mor, Mor>, Pf> pf_cache_;
  std::unordered_map<TermId, std::vector<TermId>> el_cache_;
  std::unordered_map<TermId, int> is_code_cache_;
  Obj terminal_ = kNone;
  CodeUniverse cu_;
  std::deque<FiniteUniverse> universes_;
  std::unordered_map<std::string, size_t> universe_index_;

 public:
  // umap registry: slot 0 is the code universe; finite universes follow
  struct UmapRec {
    Obj u, tu;
    Mor pi;
  };
  const UmapRec& umap_rec(uint32_t id) const { return umaps_[id]; }

 private:
  std::deque<UmapRec> umaps_;
  uint32_t register_umap(Obj u, Obj tu);
};

}  // namespace ucat
