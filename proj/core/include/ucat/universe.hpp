#pragma once

#include "ucat/backend.hpp"

#include <functional>
#include <memory>
#include <string>
#include <variant>

namespace ucat {

class Codeset;

// A map p together with a name/point pair exhibiting it as a pullback of the
// universal map. The claimed square is
//
//   dom(p) --point--> tU
//     |p                |pi
//   cod(p) --name-->   U
struct Fibrancy {
  Mor p = kNone;
  Mor name = kNone;
  Mor point = kNone;
};

struct ExtData {
  Obj obj;   // G.A
  Mor proj;  // G.A -> G
  Mor var;   // G.A -> tU
};

// A universal map: an exponentiable pi : tU -> U with a chosen pullback
// operator (extension) and a naming procedure for maps that happen to be
// pullbacks of pi.
class UniversalMap {
 public:
  Backend* C = nullptr;
  Obj u = kNone, tu = kNone;
  Mor pi = kNone;
  std::string label;

  // selected pullback along a name G -> U; split: extending along A.f equals
  // pulling the extension back along f
  ExtData extend(Mor name) const;
  Fibrancy canonical_fib(Mor name) const;  // fibrancy of extend(name).proj

  // name_fibration: produce a fibrancy structure for p, or nothing with a
  // reason when p is not classifiable
  std::function<std::optional<Fibrancy>(Mor p)> classifier;
  mutable std::string last_refusal;
  std::optional<Fibrancy> classify(Mor p) const;

  Square fib_square(const Fibrancy& f) const {
    return Square{f.point, f.p, pi, f.name};
  }
  // rebase a fibrancy structure along g : B' -> cod(p); exact by the split
  // discipline
  Fibrancy rebase(const Fibrancy& f, Mor g) const;
};

SquareReport verify_fibrancy(Backend& c, const UniversalMap& um, const Fibrancy& f,
                             const std::vector<Probe>& probes);

struct InternalUniverse {
  // ambient fibrancy structures for tU0 ->> U0 and U0 ->> 1
  Fibrancy el_fib;
  Fibrancy base_fib;
};

struct Refutation {
  std::string reason;
};

// check that `inner` is an internal fibrant universe of `amb`: both its total
// projection and its base admit canonical ambient fibrancy structures
std::variant<InternalUniverse, Refutation> check_internal_universe(
    Backend& c, const UniversalMap& amb, const UniversalMap& inner,
    const std::vector<Probe>& probes);

// codeset universal maps
UniversalMap code_umap(Codeset& cs);
UniversalMap finite_umap(Codeset& cs, const std::string& universe_name);

}  // namespace ucat
