#pragma once

#include "ucat/backend.hpp"
#include "ucat/lifting.hpp"
#include "ucat/poly.hpp"
#include "ucat/universe.hpp"

#include <memory>
#include <optional>

namespace ucat {

class Codeset;

struct UnitStructure {
  Mor name;  // 1 -> U, extension iso to 1
};

struct SigmaStructure {
  GenCompData gc;
  Fibrancy fib;  // on the composite tower map
};

struct PiStructure {
  Backend::Pf exe_pf;  // pi_*(tU x tU)
  Backend::Pf exb_pf;  // pi_*(tU x U)
  Mor map;             // pi_*(tU x tU) -> pi_*(tU x U)
  Fibrancy fib;        // on `map`
};

struct PreIdStructure {
  Obj tutu;      // tU xU tU
  Mor pr0, pr1;  // tutu -> tU
  Mor diag;      // tU -> tutu
  Mor id_map;    // tutu -> U
  Mor refl_name; // tU -> tU, over the pre-Id square
};

struct IdStructure {
  PreIdStructure pre;
  IdFactor generic;  // Id factorization of pi itself (E = tU over B = U)
};

// Intensional-type-theory bundle on one universal map, with the closure
// operations every downstream construction consumes.
class Itt {
 public:
  Backend* C = nullptr;
  UniversalMap um;
  std::optional<UnitStructure> unit;
  std::optional<SigmaStructure> sigma;
  std::optional<PiStructure> pi;
  std::optional<IdStructure> id;
  // raw generic-object data, present whether or not the universe can name
  // the generic objects
  std::optional<GenCompData> gc0;  // gen_comp(pi, pi)
  Backend::Pf exe_pf0;             // pi_*(tU x tU)
  Mor poly_map0 = kNone;           // pi_*(tU x tU) -> pi_*(tU x U)
  // size obstructions recorded when a finite universe cannot name a generic
  // object (the universe then has no Sigma/Pi structure)
  std::string sigma_obstruction, pi_obstruction;

  const SigmaStructure& require_sigma() const {
    if (!sigma) throw std::runtime_error(sigma_obstruction.empty() ? "no Sigma structure"
                                                                   : sigma_obstruction);
    return *sigma;
  }
  const PiStructure& require_pi() const {
    if (!pi) throw std::runtime_error(pi_obstruction.empty() ? "no Pi structure"
                                                             : pi_obstruction);
    return *pi;
  }

  // closure under composition (Sigma): the composite of two named fibrations
  // acquires a name; stages must be canonical extensions
  virtual Fibrancy compose_fib(const Fibrancy& lower, const Fibrancy& upper);
  // closure under pushforward (Pi)
  virtual Fibrancy push_name(const Fibrancy& along, const Fibrancy& of) = 0;
  // Id factorization of a named fibration
  virtual IdFactor id_of(const Fibrancy& fib);
  // internal hom [A, B]_S as a named fibration over S
  virtual Fibrancy hom_fib(const Fibrancy& a, const Fibrancy& b);
  // rebase of a fibrancy structure (delegates to the universal map)
  Fibrancy rebase(const Fibrancy& f, Mor g) const { return um.rebase(f, g); }

  // transport of a section-like map along a homotopy (J + Pi route)
  virtual Mor transport_along(const Fibrancy& f, const IdFactor& idf, Mor h, Mor m);
  // the transport map of a named fibration f over the Id object of its base
  // (the base presented by idf); restricting along refl gives the identity
  virtual Mor derive_transport(const Fibrancy& f, const IdFactor& idf);

  LiftOracle oracle();

  virtual ~Itt() = default;
};

// type structures on codeset universes; throws with a size obstruction
// message when a finite universe cannot name a generic object
std::shared_ptr<Itt> build_itt_code(Codeset& cs);
std::shared_ptr<Itt> build_itt_finite(Codeset& cs, const std::string& universe_name);

// probe/sample verification of a structure square: direct probe check over a
// finite base, or restriction along the supplied sample points of the base
SquareReport verify_structure_square(Backend& c, const UniversalMap& um, const Fibrancy& f,
                                     const std::vector<Probe>& probes,
                                     const std::vector<Mor>& base_samples);

// the pullback-Hom encoding of the generic J-elimination problem over a
// finite universe: a section of dmap converts to and from a J-structure
struct PullbackHomData {
  Obj diag, sq;
  Mor dmap;          // diag -> sq
  Mor diag_anchor;   // diag -> U
  Mor sq_anchor;     // sq -> U
};
PullbackHomData make_pullback_hom(Itt& itt);
// extract the section corresponding to a refl-lifting structure
Mor structure_to_section(Itt& itt, const PullbackHomData& ph, const LeftLift& j);
// turn a section into a refl-lifting structure
LeftLift section_to_structure(Itt& itt, const PullbackHomData& ph, Mor section);

// closure verdicts per the generic-quantifier propositions
struct ClosureReport {
  bool compose_ok = false;
  bool push_ok = false;
  bool hom_ok = false;
  std::string detail;
  bool pass() const { return compose_ok && push_ok && hom_ok; }
};
ClosureReport closure_checks(Itt& itt, const Fibrancy& upper, const Fibrancy& lower,
                             const std::vector<Probe>& probes);

}  // namespace ucat
