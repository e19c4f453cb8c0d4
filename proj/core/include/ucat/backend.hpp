#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucat {

using Obj = uint32_t;
using Mor = uint32_t;
inline constexpr uint32_t kNone = 0xffffffffu;

struct Probe {
  Obj obj;
};

enum class Verdict : uint8_t {
  Pass,
  FailNotCommuting,
  FailNoFactor,
  FailNonUnique,
  Inapplicable,
};

const char* verdict_name(Verdict v);

// A commuting square claimed to be a pullback:
//
//   A --top--> C
//   |          |
//  left      right
//   v          v
//   B --bot--> D
struct Square {
  Mor top, left, right, bot;
};

struct SquareReport {
  Verdict verdict = Verdict::Pass;
  std::string detail;
  // number of cones checked across all probes
  uint64_t cones = 0;
  bool pass() const { return verdict == Verdict::Pass; }
};

// Finitely complete category with chosen pullbacks, optional pushforwards,
// optional finite coproducts and optional Hom enumeration. Handles are only
// meaningful relative to one backend instance. All operations are
// deterministic: structurally equal constructions return identical handles.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual Obj dom(Mor f) const = 0;
  virtual Obj cod(Mor f) const = 0;
  virtual Mor identity(Obj x) = 0;
  virtual Mor compose(Mor g, Mor f) = 0;  // g after f
  virtual Obj terminal() = 0;
  virtual Mor bang(Obj x) = 0;  // X -> 1

  virtual bool enumerable(Obj x) const = 0;
  virtual std::optional<size_t> size_of(Obj x) const = 0;
  // Hom(1, X), canonical order; requires enumerable(X)
  virtual std::vector<Mor> points(Obj x) = 0;
  // exhaustive duplicate-free Hom(A, B) in canonical order; requires
  // enumerable(A) and enumerable(B)
  virtual std::vector<Mor> hom(Obj a, Obj b) = 0;

  struct Pb {
    Obj apex = kNone;
    Mor to_f;  // apex -> dom(f)
    Mor to_g;  // apex -> dom(g)
  };
  // chosen pullback of the cospan (f, g); cod(f) = cod(g)
  virtual Pb pullback(Mor f, Mor g) = 0;
  // mediating map into a chosen pullback apex from a commuting cone (u, v);
  // the cone is checked extensionally when the source is enumerable
  virtual Mor pb_induced(Mor f, Mor g, Mor u, Mor v) = 0;

  virtual bool mor_eq(Mor f, Mor g) const { return f == g; }

  // whether morphisms out of enumerable objects are determined by their point
  // images (true for set-like backends, false for glued ones)
  virtual bool points_determine_morphisms() const { return true; }

  // builds A -> B from images of points(A), parallel to the canonical point
  // order; supported whenever A is enumerable (B may be lazy in backends with
  // graph-backed morphisms)
  virtual Mor mor_from_point_images(Obj a, Obj b, const std::vector<Mor>& images) = 0;

  // fibers of p over a point of cod(p), as points of dom(p); nullopt when the
  // backend cannot enumerate them
  virtual std::optional<std::vector<Mor>> fiber_points(Mor p, Mor pt) = 0;

  // pushforward capability
  virtual bool has_pushforward(Mor p) = 0;
  struct Pf {
    Mor p;      // E -> B
    Mor x;      // X -> E
    Obj total;  // p_* X
    Mor proj;   // p_* X -> B
    Mor counit; // apex of pullback(proj, p) -> X, over E
    Pb star;    // chosen pullback(proj, p); star.to_g : apex -> E
  };
  virtual Pf pushforward(Mor p, Mor x) = 0;
  // transpose of f : pullback(y, p)-apex -> X over E, giving Y -> p_*X over B
  virtual Mor pf_transpose(const Pf& pf, Mor y, Mor f) = 0;
  // inverse transpose of g : Y -> p_*X over B
  virtual Mor pf_untranspose(const Pf& pf, Mor y, Mor g) = 0;

  // finite coproducts
  virtual bool has_coproducts() const { return false; }
  struct Coprod {
    Obj obj;
    std::vector<Mor> inj;
  };
  virtual Coprod coproduct(const std::vector<Obj>&) {
    throw std::runtime_error("backend has no coproducts");
  }
  virtual Mor copair(const Coprod&, const std::vector<Mor>&, Obj) {
    throw std::runtime_error("backend has no coproducts");
  }

  virtual std::string show_obj(Obj x) const = 0;
  virtual std::string show_mor(Mor f) const = 0;

  // -- derived helpers ------------------------------------------------------

  struct Prod {
    Obj obj;
    Mor p1, p2;
  };
  Prod product(Obj a, Obj b);
  Mor pair_morph(Obj a, Obj b, Mor u, Mor v);  // <u,v> : Z -> A x B

  // extensional equality check on an enumerable common domain
  bool equal_on_points(Mor f, Mor g);

  // apply a morphism to a point: f . pt
  Mor at(Mor f, Mor pt) { return compose(f, pt); }
};

// Probe-relative pullback verification. The square must have enumerable A and
// B; C may be lazy provided `right` has enumerable fibers. Every commuting
// cone from every probe must factor uniquely through the apex.
SquareReport verify_pullback_square(Backend& c, const Square& sq,
                                    const std::vector<Probe>& probes);

// Enumerate the commuting cones (u : P -> C, v : P -> B) over the cospan
// (right : C -> D, bot : B -> D). Requires enumerable P and B; C enumerable
// or right fiber-enumerable.
std::vector<std::pair<Mor, Mor>> enumerate_cones(Backend& c, Obj p, Mor right, Mor bot);

std::vector<Probe> standard_probes(Backend& c);

}  // namespace ucat
