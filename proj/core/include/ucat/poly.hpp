#pragma once

#include "ucat/backend.hpp"
#include "ucat/universe.hpp"

namespace ucat {

// functorial action of p_* on a map h : X -> Y over E
Mor pf_map(Backend& c, const Backend::Pf& pfx, const Backend::Pf& pfy, Mor h);

struct Polynomial {
  Backend::Pf pf;  // p_*(E x X -> E)
  Obj obj;         // P_p(X)
  Mor to_base;     // P_p(X) -> B
  Backend::Prod exx;
};
Polynomial polynomial_apply(Backend& c, Mor p, Obj x);

// The two-map tower classifying composites of a p-pullback followed by a
// p'-pullback:
//
//   top = ev^*(E x E') --t2--> mid = p^* p_*(E x B') --t1--> bot = p_*(E x B')
struct GenCompData {
  Mor p, pprime;
  Backend::Prod exb;  // E x B'
  Backend::Pf bot_pf; // p_*(E x B')
  Obj bot;
  Mor bot_to_base;    // bot -> B
  Obj mid;
  Mor t1;             // mid -> bot
  Mor mid_to_e;       // mid -> E
  Mor ev;             // mid -> E x B'
  Obj top;
  Mor t2;             // top -> mid
  Mor top_to_eprime;  // top -> E'
  Mor top_to_exe;     // top -> E x E'
  Backend::Prod exe;  // E x E'
  Mor composite;      // t1 . t2 : top -> bot
};
GenCompData gen_comp(Backend& c, Mor pprime, Mor p);

// One stage of a named tower: q presented as a verified pullback of p along
// (name, point).
struct NamedStage {
  Mor q;      // X -> Y
  Mor name;   // Y -> B-of-p
  Mor point;  // X -> E-of-p
};

// the canonical comparison from the chosen pullback of (f, g) to a
// user-supplied verified pullback (top, left) of the same cospan; requires a
// finite apex
Mor pullback_compare(Backend& c, Mor f, Mor g, Mor top, Mor left);

// Lemma-style pairing: the unique map X0 -> bot whose transpose is
// (point1, name2) and whose composite to B is name1. Pulling the tower back
// along it reproduces the stages.
Mor pair_names(Backend& c, const GenCompData& gc, const NamedStage& s1,
               const NamedStage& s2);

struct PairNamesCheck {
  bool reproduced_mid = false;
  bool reproduced_top = false;
  bool over_base = false;
  bool pass() const { return reproduced_mid && reproduced_top && over_base; }
};
PairNamesCheck verify_pair_names(Backend& c, const GenCompData& gc, const NamedStage& s1,
                                 const NamedStage& s2, Mor pairing);

// Lemma gen-comp-psfw: pushing t2 forward along t1 agrees with the polynomial
// image of p'; the mate is constructed by transposition and verified to be a
// bijective comparison over bot.
struct DistributivityReport {
  Verdict verdict = Verdict::Pass;
  std::string detail;
  size_t lhs_size = 0, rhs_size = 0;
  bool pass() const { return verdict == Verdict::Pass; }
};
DistributivityReport distributivity_check(Backend& c, const GenCompData& gc);

// double-enumeration adjunction oracle: Hom_B(Y, p_*X) <-> Hom_E(p^*Y, X)
struct AdjunctionReport {
  bool bijective = false;
  size_t hom_base = 0, hom_total = 0;
  std::string detail;
};
AdjunctionReport verify_pushforward_adjunction(Backend& c, Mor p, Mor x, Mor y_to_b);

}  // namespace ucat
