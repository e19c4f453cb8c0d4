#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ucat {

// Hash-consed terms. One arena holds both element terms (Atom, Star, Pair,
// Fun, Refl) and code terms (Enum, PBot, PTop, Sigma, Pi, Id). Structural
// equality coincides with id equality within one arena.
enum class Tag : uint8_t {
  Atom,   // nat payload
  Star,
  Pair,   // kids: fst, snd
  Fun,    // kids: k0,v0,k1,v1,... keys strictly increasing in term_less
  Refl,   // kids: x
  Enum,   // nat payload
  PBot,
  PTop,
  SigmaC, // kids: base, k0,c0,k1,c1,...
  PiC,    // kids: base, k0,c0,...
  IdC,    // kids: base, x, y
};

using TermId = uint32_t;
inline constexpr TermId kNoTerm = 0xffffffffu;

struct TermData {
  Tag tag;
  uint32_t nat = 0;
  std::vector<TermId> kids;
  bool operator==(const TermData& o) const {
    return tag == o.tag && nat == o.nat && kids == o.kids;
  }
};

class TermArena {
 public:
  TermId intern(TermData d);
  const TermData& data(TermId t) const { return terms_[t]; }
  Tag tag(TermId t) const { return terms_[t].tag; }

  // element constructors
  TermId atom(uint32_t n) { return intern({Tag::Atom, n, {}}); }
  TermId star() { return intern({Tag::Star, 0, {}}); }
  TermId pair(TermId a, TermId b) { return intern({Tag::Pair, 0, {a, b}}); }
  TermId refl(TermId x) { return intern({Tag::Refl, 0, {x}}); }
  // table entries are sorted by key before interning
  TermId fun(std::vector<std::pair<TermId, TermId>> table);

  // code constructors
  TermId enum_code(uint32_t n) { return intern({Tag::Enum, n, {}}); }
  TermId pbot() { return intern({Tag::PBot, 0, {}}); }
  TermId ptop() { return intern({Tag::PTop, 0, {}}); }
  TermId sigma_code(TermId base, std::vector<std::pair<TermId, TermId>> table);
  TermId pi_code(TermId base, std::vector<std::pair<TermId, TermId>> table);
  TermId id_code(TermId base, TermId x, TermId y) {
    return intern({Tag::IdC, 0, {base, x, y}});
  }

  TermId fst(TermId p) const;
  TermId snd(TermId p) const;
  // lookup in a Fun term or in the table part of Sigma/Pi codes
  std::optional<TermId> table_get(TermId table_term, TermId key) const;
  std::vector<std::pair<TermId, TermId>> table_entries(TermId t) const;

  // structural order, deterministic across interning orders
  bool term_less(TermId a, TermId b) const;
  int term_cmp(TermId a, TermId b) const;

  std::string show(TermId t) const;
  // parses the canonical s-expression form; throws std::runtime_error with
  // position info on malformed input
  TermId parse(std::string_view s) const;
  TermId parse(std::string_view s);

  size_t size() const { return terms_.size(); }

 private:
  struct DataHash {
    size_t operator()(const TermData& d) const;
  };
  std::vector<TermData> terms_;
  mutable std::unordered_map<TermData, TermId, DataHash> index_;
};

// sorts by structural term order and drops duplicates
void canonicalize_elems(const TermArena& a, std::vector<TermId>& v);

}  // namespace ucat
