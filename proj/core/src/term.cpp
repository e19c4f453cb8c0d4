#include "ucat/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ucat {

size_t TermArena::DataHash::operator()(const TermData& d) const {
  size_t h = std::hash<uint32_t>{}((uint32_t(d.tag) << 24) ^ d.nat);
  for (TermId k : d.kids) h = h * 1000003u + k;
  return h;
}

TermId TermArena::intern(TermData d) {
  auto it = index_.find(d);
  if (it != index_.end()) return it->second;
  TermId id = TermId(terms_.size());
  index_.emplace(d, id);
  terms_.push_back(std::move(d));
  return id;
}

TermId TermArena::fun(std::vector<std::pair<TermId, TermId>> table) {
  std::sort(table.begin(), table.end(), [&](auto& x, auto& y) {
    return term_less(x.first, y.first);
  });
  TermData d{Tag::Fun, 0, {}};
  for (auto& [k, v] : table) {
    d.kids.push_back(k);
    d.kids.push_back(v);
  }
  return intern(std::move(d));
}

TermId TermArena::sigma_code(TermId base, std::vector<std::pair<TermId, TermId>> table) {
  std::sort(table.begin(), table.end(), [&](auto& x, auto& y) {
    return term_less(x.first, y.first);
  });
  TermData d{Tag::SigmaC, 0, {base}};
  for (auto& [k, v] : table) {
    d.kids.push_back(k);
    d.kids.push_back(v);
  }
  return intern(std::move(d));
}

TermId TermArena::pi_code(TermId base, std::vector<std::pair<TermId, TermId>> table) {
  std::sort(table.begin(), table.end(), [&](auto& x, auto& y) {
    return term_less(x.first, y.first);
  });
  TermData d{Tag::PiC, 0, {base}};
  for (auto& [k, v] : table) {
    d.kids.push_back(k);
    d.kids.push_back(v);
  }
  return intern(std::move(d));
}

TermId TermArena::fst(TermId p) const {
  if (tag(p) != Tag::Pair) throw std::runtime_error("fst: not a pair: " + show(p));
  return terms_[p].kids[0];
}

TermId TermArena::snd(TermId p) const {
  if (tag(p) != Tag::Pair) throw std::runtime_error("snd: not a pair: " + show(p));
  return terms_[p].kids[1];
}

std::optional<TermId> TermArena::table_get(TermId t, TermId key) const {
  const TermData& d = terms_[t];
  size_t start = (d.tag == Tag::Fun) ? 0 : 1;
  if (d.tag != Tag::Fun && d.tag != Tag::SigmaC && d.tag != Tag::PiC)
    throw std::runtime_error("table_get: no table in " + show(t));
  for (size_t i = start; i + 1 < d.kids.size(); i += 2)
    if (d.kids[i] == key) return d.kids[i + 1];
  return std::nullopt;
}

std::vector<std::pair<TermId, TermId>> TermArena::table_entries(TermId t) const {
  const TermData& d = terms_[t];
  size_t start = (d.tag == Tag::Fun) ? 0 : 1;
  if (d.tag != Tag::Fun && d.tag != Tag::SigmaC && d.tag != Tag::PiC)
    throw std::runtime_error("table_entries: no table in " + show(t));
  std::vector<std::pair<TermId, TermId>> out;
  for (size_t i = start; i + 1 < d.kids.size(); i += 2)
    out.emplace_back(d.kids[i], d.kids[i + 1]);
  return out;
}

int TermArena::term_cmp(TermId a, TermId b) const {
  if (a == b) return 0;
  const TermData& x = terms_[a];
  const TermData& y = terms_[b];
  if (x.tag != y.tag) return x.tag < y.tag ? -1 : 1;
  if (x.nat != y.nat) return x.nat < y.nat ? -1 : 1;
  if (x.kids.size() != y.kids.size()) return x.kids.size() < y.kids.size() ? -1 : 1;
  for (size_t i = 0; i < x.kids.size(); ++i)
    if (int c = term_cmp(x.kids[i], y.kids[i])) return c;
  return 0;
}

bool TermArena::term_less(TermId a, TermId b) const { return term_cmp(a, b) < 0; }

namespace {
const char* tag_name(Tag t) {
  switch (t) {
    case Tag::Atom: return "Atom";
    case Tag::Star: return "Star";
    case Tag::Pair: return "Pair";
    case Tag::Fun: return "Fun";
    case Tag::Refl: return "Refl";
    case Tag::Enum: return "Enum";
    case Tag::PBot: return "PBot";
    case Tag::PTop: return "PTop";
    case Tag::SigmaC: return "Sigma";
    case Tag::PiC: return "Pi";
    case Tag::IdC: return "Id";
  }
  return "?";
}
}  // namespace

std::string TermArena::show(TermId t) const {
  const TermData& d = terms_[t];
  switch (d.tag) {
    case Tag::Star:
    case Tag::PBot:
    case Tag::PTop:
      return tag_name(d.tag);
    case Tag::Atom:
    case Tag::Enum:
      return std::string("(") + tag_name(d.tag) + " " + std::to_string(d.nat) + ")";
    case Tag::Pair:
    case Tag::Refl:
    case Tag::IdC: {
      std::string s = std::string("(") + tag_name(d.tag);
      for (TermId k : d.kids) s += " " + show(k);
      return s + ")";
    }
    case Tag::Fun: {
      std::string s = "(Fun";
      for (size_t i = 0; i + 1 < d.kids.size(); i += 2)
        s += " (" + show(d.kids[i]) + " " + show(d.kids[i + 1]) + ")";
      return s + ")";
    }
    case Tag::SigmaC:
    case Tag::PiC: {
      std::string s = std::string("(") + tag_name(d.tag) + " " + show(d.kids[0]);
      for (size_t i = 1; i + 1 < d.kids.size(); i += 2)
        s += " (" + show(d.kids[i]) + " " + show(d.kids[i + 1]) + ")";
      return s + ")";
    }
  }
  return "?";
}

namespace {

struct Parser {
  std::string_view s;
  size_t pos = 0;
  TermArena& a;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("term parse error at offset " + std::to_string(pos) + ": " + msg);
  }
  void skip() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string word() {
    skip();
    size_t b = pos;
    while (pos < s.size() && (std::isalnum((unsigned char)s[pos]))) ++pos;
    if (b == pos) fail("expected identifier");
    return std::string(s.substr(b, pos - b));
  }
  uint32_t nat() {
    skip();
    size_t b = pos;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
    if (b == pos) fail("expected number");
    return uint32_t(std::stoul(std::string(s.substr(b, pos - b))));
  }
  std::pair<TermId, TermId> entry() {
    if (!eat('(')) fail("expected table entry");
    TermId k = term();
    TermId v = term();
    if (!eat(')')) fail("unclosed table entry");
    return {k, v};
  }
  TermId term() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    if (s[pos] != '(') {
      std::string w = word();
      if (w == "Star") return a.star();
      if (w == "PBot") return a.pbot();
      if (w == "PTop") return a.ptop();
      fail("unknown atom: " + w);
    }
    ++pos;  // '('
    std::string w = word();
    TermId r = kNoTerm;
    if (w == "Atom") r = a.atom(nat());
    else if (w == "Enum") r = a.enum_code(nat());
    else if (w == "Pair") { TermId x = term(); TermId y = term(); r = a.pair(x, y); }
    else if (w == "Refl") r = a.refl(term());
    else if (w == "Id") { TermId c = term(); TermId x = term(); TermId y = term(); r = a.id_code(c, x, y); }
    else if (w == "Fun" || w == "Sigma" || w == "Pi") {
      TermId base = kNoTerm;
      if (w != "Fun") base = term();
      std::vector<std::pair<TermId, TermId>> tbl;
      skip();
      while (pos < s.size() && s[pos] == '(') {
        tbl.push_back(entry());
        skip();
      }
      if (w == "Fun") r = a.fun(std::move(tbl));
      else if (w == "Sigma") r = a.sigma_code(base, std::move(tbl));
      else r = a.pi_code(base, std::move(tbl));
    } else {
      fail("unknown constructor: " + w);
    }
    if (!eat(')')) fail("unclosed term");
    return r;
  }
};

}  // namespace

TermId TermArena::parse(std::string_view s) {
  Parser p{s, 0, *this};
  TermId t = p.term();
  p.skip();
  if (p.pos != s.size()) p.fail("trailing input");
  return t;
}

TermId TermArena::parse(std::string_view s) const {
  return const_cast<TermArena*>(this)->parse(s);
}

void canonicalize_elems(const TermArena& a, std::vector<TermId>& v) {
  std::sort(v.begin(), v.end(), [&](TermId x, TermId y) { return a.term_less(x, y); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace ucat
