#pragma once

#include "ucat/typestructs.hpp"

namespace ucat {

// The generic object of homotopy identities and isomorphisms of a universal
// map with a pre-Id structure. Objects are built from pushforwards and the
// canonical pullback chain; fibrancy structures are assembled separately when
// Sigma/Pi structures are present.
struct HIsoData {
  // [tU, tU]_U and the two slice homs over U x U
  Backend::Pf endo_pf;
  Backend::Pf homab_pf, homba_pf;
  Backend::Prod uxu;
  Fibrancy pixu, uxpi;   // tU x U and U x tU over U x U (rebases of pi)
  Mor g = kNone;         // endo -> bot, the Id-composite of the gen-auto lemma
  Obj hid = kNone;
  Mor hid_to_endo = kNone;  // HId -> [tU,tU]_U
  Obj cp = kNone;           // composable pairs
  Mor cp_s = kNone, cp_f = kNone;  // CP -> homBA, CP -> homAB
  Mor comp_at_a = kNone, comp_at_b = kNone;  // CP -> endo
  Obj lhinv = kNone, rhinv = kNone;
  Mor lh_p = kNone, rh_p = kNone;  // to CP
  Obj hiso = kNone;
  Mor hiso_to_lh = kNone, hiso_to_rh = kNone;
  Mor hiso_to_hom = kNone;  // HIso -> homAB
  Mor srctgt = kNone;       // HIso -> U x U
  Mor src = kNone, tgt = kNone;
  Mor trv = kNone;          // U -> HIso
};

// requires a pre-Id structure; Sigma/Pi fibrancies are not needed for the
// objects themselves
HIsoData build_hiso(Itt& itt);

// fibrancy structures per the endpoint-fibrancy proposition: assembled by the
// composite argument from the Sigma and Pi structures
struct EndpointFibrancy {
  Fibrancy srctgt;      // (src,tgt) : HIso ->> U x U
  Fibrancy hiso_to_hom; // HIso ->> homAB
  Fibrancy hom_ab;      // homAB ->> U x U
};
EndpointFibrancy endpoint_fibrancy(Itt& itt, const HIsoData& h);

// brute-force representability verification on a probe: the Hom-set into the
// object is matched against the enumerated presheaf tuples
struct RepReport {
  bool pass = false;
  size_t hom_count = 0;
  size_t tuple_count = 0;
  std::string detail;
};
// HId: tuples (A, t, H) with H : t ~ id
RepReport representability_hid(Itt& itt, const HIsoData& h, Obj probe);
// HIso: tuples (A, B, f, s, r, Hs, Hr)
RepReport representability_hiso(Itt& itt, const HIsoData& h, Obj probe);
// trv represents A |-> (A, A, id, id, id, refl, refl)
RepReport representability_trv(Itt& itt, const HIsoData& h, Obj probe);

// structural fiber count of HIso over a pair of type points, plus the
// brute-force tuple count over the same pair
struct FiberCount {
  size_t structural = 0;
  size_t brute = 0;
};
FiberCount hiso_fiber_count(Itt& itt, const HIsoData& h, Mor a_pt, Mor b_pt);

}  // namespace ucat
