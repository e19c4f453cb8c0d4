#pragma once

#include "ucat/backend.hpp"
#include "ucat/hiso.hpp"
#include "ucat/lifting.hpp"
#include "ucat/typestructs.hpp"
#include "ucat/univalence.hpp"

#include <deque>
#include <map>
#include <memory>

namespace ucat {

// A lex functor between backends, with the canonical comparison for chosen
// pullbacks and the terminal point. Lex-ness is supplied data, probe-verified
// rather than derived.
struct GlueFunctor {
  Backend* c0 = nullptr;
  Backend* c1 = nullptr;
  std::function<Obj(Obj)> fobj;
  std::function<Mor(Mor)> fmor;
  // c1.pullback(M f, M g).apex -> M(c0.pullback(f, g).apex)
  std::function<Mor(Mor, Mor)> lex_compare;
  // optional left adjoint D -| M with unit and counit
  bool has_left_adjoint = false;
  std::function<Obj(Obj)> dobj;
  std::function<Mor(Mor)> dmor;
  std::function<Mor(Obj)> unit;    // B -> M D B in c1
  std::function<Mor(Obj)> counit;  // D M Y -> Y in c0
};

GlueFunctor identity_functor(Backend& c);

// probe-level verification that the functor preserves finite limits
SquareReport verify_lex(const GlueFunctor& m, Mor f, Mor g, const std::vector<Probe>& probes);
// probe-level triangle identities of D -| M
bool verify_adjunction_triangles(const GlueFunctor& m, Obj b1, Obj y0);

// The Artin-Wraith gluing category of M: objects are maps X1 -> M X0.
class Glue : public Backend {
 public:
  explicit Glue(GlueFunctor m);

  GlueFunctor m;
  Backend& c0() { return *m.c0; }
  Backend& c1() { return *m.c1; }

  Obj glue_obj(Obj x0, Obj x1, Mor structure);
  Mor glue_mor(Obj dom, Obj cod, Mor f0, Mor f1);
  Obj comp0(Obj x) const { return objs_[x].x0; }
  Obj comp1(Obj x) const { return objs_[x].x1; }
  Mor structure(Obj x) const { return objs_[x].structure; }
  Mor mcomp0(Mor f) const { return mors_[f].f0; }
  Mor mcomp1(Mor f) const { return mors_[f].f1; }

  // relative matching data of a map f : Y -> X
  struct Matching {
    Obj whm;      // relative matching object, in c1
    Mor whm_map;  // Y1 -> whm
    Mor to_x1;    // whm -> X1
    Mor to_my0;   // whm -> M Y0
  };
  Matching relative_matching(Mor f);

  // Backend interface
  Obj dom(Mor f) const override { return mors_[f].dom; }
  Obj cod(Mor f) const override { return mors_[f].cod; }
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
  std::string show_obj(Obj x) const override;
  std::string show_mor(Mor f) const override;
  bool mor_eq(Mor f, Mor g) const override { return f == g; }

 private:
  struct ObjData {
    Obj x0, x1;
    Mor structure;
  };
  struct MorData {
    Obj dom, cod;
    Mor f0, f1;
  };
  std::deque<ObjData> objs_;
  std::deque<MorData> mors_;
  std::map<std::tuple<Obj, Obj, Mor>, Obj> obj_index_;
  std::map<std::tuple<Obj, Obj, Mor, Mor>, Mor> mor_index_;
  std::map<std::pair<Mor, Mor>, Pb> pb_cache_;
  std::map<std::pair<Mor, Mor>, Pf> pf_cache_;
  std::map<std::pair<Mor, Mor>, Matching> match_cache_;
  Obj terminal_ = kNone;
};

// the universal Reedy fibration of the gluing: 0-component pi0, 1-component
// the generic composite of pi1 with M pi0
struct GlueUniverse {
  Obj v = kNone, tv = kNone;
  Mor tau = kNone;
  GenCompData gc;  // in c1
  UniversalMap um; // over the glue backend, with the Reedy classifier
};
GlueUniverse build_urf(Glue& g, Itt& itt0, Itt& itt1);

// Reedy fibration check per the definition (0-component and relative
// matching map classifiable in the components)
struct ReedyReport {
  bool is_reedy = false;
  std::string detail;
};
ReedyReport check_reedy(Glue& g, Itt& itt0, Itt& itt1, Mor p);

// the sigma factorization of the Id type for a composable pair of
// fibrations: the fibrant object Id-bar with refl-bar and its clauses
struct SigmaFact {
  Obj idbar = kNone;
  Mor evd_bar = kNone;   // idbar -> pullback base (P x_{E0xE0} (E1 x E1))
  Obj pbase = kNone;     // P x_{E0 xB E0} (E1 xB E1)
  Mor pbase_to_p = kNone;
  Mor pbase_to_e1e1 = kNone;
  Mor reflbar = kNone;   // E1 -> idbar
  Mor transport = kNone; // p0^* E1 -> p1^* E1 over P
};
// tower: x (E1 ->> E0) over e (E0 ->> B), with a diagonal factorization
// r : E0 -> P, pfac : P -> E0 xB E0 where r carries a lifting structure
SigmaFact sigma_fact(Itt& itt, const Fibrancy& e, const Fibrancy& x, Mor r, Mor pfac,
                     const LeftLift& r_lift);

// Shulman-style cube transfer: structures for u1, u2, u3 with cartesian back
// and front faces give a structure for the induced map u4 on pullbacks
struct CubeData {
  Mor u1, u2, u3;       // X1->Y1, X2->Y2, X3->Y3
  Mor x31, y31;         // the fibrations X3 ->> X1, Y3 ->> Y1
  Mor x21, y21;         // X2 -> X1, Y2 -> Y1
  Fibrancy y3_fib;      // Y3 ->> Y1 named (for the pullback transfer)
  Obj base = kNone;     // the ambient slice base
  Mor x4_anchor = kNone, y4_anchor = kNone;
};
struct CubeResult {
  Mor u4 = kNone;
  Obj x4 = kNone, y4 = kNone;
  std::optional<LeftLift> lift;
  std::string detail;
};
CubeResult cube_transfer(Backend& c, const UniversalMap& um, const CubeData& cube,
                         const LeftLift& ls1, const LeftLift& ls2, const LeftLift& ls3,
                         const LiftOracle& oracle, const std::vector<Probe>& probes);

// the intensional-type-theory bundle of a glued universe
class GlueItt : public Itt {
 public:
  Glue* g = nullptr;
  Itt* itt0 = nullptr;
  Itt* itt1 = nullptr;
  GlueUniverse gu;
  Fibrancy push_name(const Fibrancy& along, const Fibrancy& of) override;
  IdFactor id_of(const Fibrancy& fib) override;
};
std::shared_ptr<GlueItt> build_glue_itt(Glue& g, Itt& itt0, Itt& itt1);

// pointed functional extensionality on the glued universe, assembled from the
// component structures by the pointwise split and the cube lemma
LeftLift glue_funext_family(GlueItt& itt, const Fibrancy& q, const Fibrancy& y,
                            const Fibrancy& e, Mor s, const LeftLift& ls_s);

// pointed univalence of the glued internal universe; also verifies the
// relative-matching-as-polynomial comparison on the way
struct GlueUAReport {
  UAVerdict verdict;
  bool rel_match_iso = false;  // Whm(trv) agrees with the polynomial image
  std::string detail;
};
GlueUAReport glue_ua(GlueItt& amb, GlueItt& inner, const std::vector<Probe>& probes);

}  // namespace ucat
