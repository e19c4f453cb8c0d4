#pragma once

#include "ucat/backend.hpp"
#include "ucat/universe.hpp"

#include <functional>
#include <optional>

namespace ucat {

// A lifting problem of the cylinder X xS i against a named fibration:
//
//   X xS K --u--> P
//      |          |  target.p
//   X xS L --v--> Z
//
// Cylinders are the chosen pullbacks pullback(anchor, x): to_f lands in the
// anchored object, to_g in X.
struct LiftInstance {
  Mor x_anchor;     // X -> S
  Fibrancy target;  // p : P ->> Z with a name against the ambient universe
  Mor u;
  Mor v;
};

// Executable uniform left-lifting structure of i : K -> L (over the slice
// base S) against named fibrations. `full` structures make both triangles
// commute; lower-half structures only the bottom one.
class LeftLift {
 public:
  Backend* C = nullptr;
  const UniversalMap* um = nullptr;
  Mor i = kNone;
  Obj s = kNone;
  Mor k_anchor = kNone;  // K -> S
  Mor l_anchor = kNone;  // L -> S, with k_anchor = l_anchor . i
  bool full = true;
  // set when the structure is the canonical one for an isomorphism; rebases
  // can then be rebuilt instead of delegated
  Mor iso_inverse = kNone;
  std::function<Mor(const LiftInstance&)> solver;

  Backend::Pb cyl_k(Mor x_anchor) const { return C->pullback(k_anchor, x_anchor); }
  Backend::Pb cyl_l(Mor x_anchor) const { return C->pullback(l_anchor, x_anchor); }
  Mor cyl_i(Mor x_anchor) const;  // X xS K -> X xS L

  // solve and check the contract on enumerable cylinders
  Mor solve(const LiftInstance& inst) const;
};

// induced X xS A -> X xS B for m : A -> B over S
Mor cylinder_map(Backend& c, Mor x_anchor, Mor m, Mor a_anchor, Mor b_anchor);

// structure for an isomorphism i (the canonical base case; J-structures in
// strict-Id backends are of this form)
LeftLift iso_left_lift(Backend& c, const UniversalMap& um, Mor i, Obj s, Mor k_anchor,
                       Mor l_anchor, Mor i_inv, bool full = true);

// left maps compose: structures for i : K -> L and j : L -> N give j . i
LeftLift compose_left(const LeftLift& a, const LeftLift& b);

// forgetful coercion: a full structure is in particular lower-half
LeftLift as_lower_half(const LeftLift& ls);

// the cartesian rebase of a structure along x : X -> S, for anchors carried
// by extension projections (so that cylinder pasting is exact); the rebased
// structure delegates by composing anchors
LeftLift rebase_left(const LeftLift& ls, Mor x, Mor new_i, Mor new_k_anchor,
                     Mor new_l_anchor);

// Id-type factorization data of one named fibration E ->> B:
//   E --refl--> IdObj --evd--> E xB E
struct IdFactor {
  Obj base = kNone;       // B
  Fibrancy e_fib;         // E ->> B named
  Obj exe = kNone;        // E xB E = pullback(p, p).apex
  Mor pr0 = kNone, pr1 = kNone;  // exe -> E
  Mor exe_anchor = kNone; // exe -> B
  Mor diag = kNone;       // E -> exe
  Obj idobj = kNone;
  Mor evd = kNone;        // IdObj -> exe (an extension projection)
  Fibrancy evd_fib;
  Mor ev0 = kNone, ev1 = kNone;  // IdObj -> E
  Mor refl = kNone;       // E -> IdObj
  Mor id_anchor = kNone;  // IdObj -> B
  LeftLift refl_lift;     // structure of refl over B
};

// the cylindered Id factorization over x : X -> B; exact on handles thanks to
// the split extension discipline
IdFactor rebase_id_factor(Backend& c, const UniversalMap& um, const IdFactor& idf, Mor x);

// capabilities the closure constructions borrow from the type structures
struct LiftOracle {
  // name the pushforward pushforward(along.p, of.p); the returned fibrancy
  // has p equal to that pushforward's projection
  std::function<Fibrancy(const Fibrancy& along, const Fibrancy& of)> push_name;
  // transport m : W -> total(f) along a homotopy h : W -> idf.idobj with
  // f.p . m = ev0 . h; the result lies over ev1 . h, and restricting h to
  // refl returns m
  std::function<Mor(const Fibrancy& f, const IdFactor& idf, Mor h, Mor m)> transport_along;
};

// structure for the pullback of a left map along a named fibration, via the
// pushforward transposition
LeftLift transfer_pullback(const LeftLift& ls, const Fibrancy& w, const LiftOracle& oracle);

// homotopy-retract transfer: data over B with s.i = j, r.j = i and an
// Id-homotopy H : r.s ~ id (constant along i in pointed mode)
struct RetractData {
  Mor i;  // U -> E
  Mor j;  // U -> E'
  Mor s;  // E -> E'
  Mor r;  // E' -> E
  Mor h;  // E -> IdObj(E), with evd . h = <r.s, id>
  Obj base;
  Mor u_anchor, e_anchor, eprime_anchor;
  IdFactor e_id;  // Id factorization of E ->> B (e_anchor = e_id.e_fib.p)
};
enum class TransferMode { Pointed, LowerHalf };
LeftLift retract_transfer(const RetractData& data, const LeftLift& ls_j, TransferMode mode,
                          const LiftOracle& oracle);

// dual-of-strong-deformation-retract criterion: decides by brute force
// whether g : Y -> E exhibits f : E -> Y as the dual of a strong
// Id-deformation retract (pointed) or an Id-retraction (lower half), and on
// success produces the lifting structure by retract transfer
struct SdrReport {
  bool pass = false;
  std::string detail;
  uint64_t search_space = 0;
  std::optional<LeftLift> lift;
  Mor homotopy = kNone;
};
SdrReport sdr_check(Backend& c, const UniversalMap& um, const IdFactor& e_id, Mor f, Mor g,
                    TransferMode mode, const LiftOracle& oracle);

// exhaustive filler search in canonical order; the independent oracle for all
// lifting claims
struct FillerSearch {
  std::optional<Mor> filler;
  uint64_t space = 0;  // number of candidate cells examined
  std::string witness; // set when no filler exists
};
FillerSearch brute_force_filler(Backend& c, const LeftLift& shape, const LiftInstance& inst,
                                bool lower_half_only);

// uniformity law on a supplied family of reindexings t : X' -> X
bool verify_uniformity(const LeftLift& ls, const LiftInstance& inst,
                       const std::vector<Mor>& reindexings);

}  // namespace ucat
