#pragma once

#include "ucat/hiso.hpp"
#include "ucat/lifting.hpp"
#include "ucat/typestructs.hpp"

namespace ucat {

enum class UAMode : uint8_t { Pointed, Book };

// Verdicts are three-valued: a structure, an exhaustive refutation, or a
// missing-prerequisite report. The search space size of the homotopy search
// is recorded either way.
struct UAVerdict {
  enum Kind : uint8_t { Structure, Refuted, Inapplicable } kind = Inapplicable;
  std::string detail;
  uint64_t search_space = 0;
  std::optional<LeftLift> lift;  // the trv lifting structure on success
  Mor homotopy = kNone;
  Fibrancy srctgt_amb;  // (src,tgt) named against the ambient universe
  Fibrancy src_amb;     // src named against the ambient universe
  bool endpoint_via_composite = false;  // whether the Sigma/Pi route was used
};

// the dual-strong-deformation-retract criterion on a finite inner universe,
// relative to the ambient universe: search for the homotopy trv.src ~ id
// (constant along trv in pointed mode) and transfer on success
UAVerdict check_univalence_sdf(Itt& amb, Itt& inner, const HIsoData& h, UAMode mode);

// type-theoretic univalence data: s, r : HIso -> Id(U0) with J backwards and
// the two homotopies; in pointed mode the constancy equations hold exactly
struct TTUAData {
  Mor s = kNone, r = kNone;
  Mor j = kNone;          // Id(U0) -> HIso
  Mor h_s = kNone;        // HIso -> Id(HIso): J.s ~ id
  Mor h_r = kNone;        // Id(U0) -> Id(Id(U0)): r.J ~ id
  bool pointed = false;
  IdFactor id_u0;         // ambient Id factorization of U0 over 1
  IdFactor id_hiso;       // ambient Id factorization of HIso over U0 x U0
  Fibrancy srctgt_amb;
};
TTUAData ua_to_tt(Itt& amb, Itt& inner, const HIsoData& h, const UAVerdict& ua);

// transfer along the homotopy retract: the type-theoretic data gives back a
// lifting structure for trv (over the U0 x U0 slice)
LeftLift tt_to_ua(Itt& amb, Itt& inner, const HIsoData& h, const TTUAData& tt, UAMode mode);

// pointed functional extensionality: a structured lift of P_pi(refl) against
// the universal map, canonical in strict-Id backends
struct PointedFunext {
  LeftLift base;          // structure for P_pi(refl) over U
  Mor poly_refl = kNone;  // P_pi(tU) -> P_pi(IdObj)
  Obj poly_tu = kNone, poly_id = kNone;
};
PointedFunext build_pointed_funext(Itt& itt);

// the canonical comparison q_*(Id_B E) -> Id_A(q_* E) realizing the
// functional-extensionality collapse of pushforwards of reflexivity
struct FunextComparison {
  Fibrancy q_e;        // q_* E over A
  Fibrancy q_id;       // q_*(Id_B E) over A
  IdFactor id_a;       // Id_A(q_* E)
  IdFactor id_b;       // Id_B(E)
  Mor phi = kNone;     // q_*(Id_B E) -> Id_A(q_* E)
  Mor m0 = kNone, m1 = kNone;  // pushed endpoint evaluations
  Backend::Pf qe_pf, qid_pf;
  Mor q = kNone;
};
FunextComparison funext_comparison(Itt& itt, const Fibrancy& q, const Fibrancy& e);

// the family (s over B) -> (q_* s over A) of the pointed-funext
// characterization: pushforward the retraction data and transfer
LeftLift ptdfunext_family(Itt& itt, const PointedFunext& pf, const Fibrancy& q,
                          const Fibrancy& y, const Fibrancy& e, Mor s,
                          const LeftLift& ls_s);

// type-theoretic funext maps s, r : q_*(Id_B E) -> Id_A(q_* E) with their
// exactness checks
struct FunextTT {
  Mor s = kNone, r = kNone;
  bool s_exact = false;  // s . q_*(refl) = refl
};
FunextTT funext_tt_maps(Itt& itt, const FunextComparison& cmp);

}  // namespace ucat
