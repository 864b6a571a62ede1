#include "fsat/hfs.hpp"

#include <algorithm>
#include <set>

namespace fsat {

namespace {

const std::shared_ptr<const std::vector<Hfs>>& empty_members() {
  static const auto e = std::make_shared<const std::vector<Hfs>>();
  return e;
}

}  // namespace

Hfs::Hfs() : members_(empty_members()) {}

Hfs Hfs::of(std::vector<Hfs> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Hfs h;
  if (!members.empty()) h.members_ = std::make_shared<const std::vector<Hfs>>(std::move(members));
  return h;
}

int compare(const Hfs& a, const Hfs& b) {
  if (a.members_ == b.members_) return 0;
  const auto& x = *a.members_;
  const auto& y = *b.members_;
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(x[i], y[i])) return c;
  if (x.size() == y.size()) return 0;
  return x.size() < y.size() ? -1 : 1;
}

std::size_t Hfs::rank() const {
  std::size_t r = 0;
  for (const auto& m : members()) r = std::max(r, m.rank() + 1);
  return r;
}

std::string Hfs::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < members().size(); ++i) {
    if (i) s += ",";
    s += members()[i].to_string();
  }
  return s + "}";
}

Hfs normalize(const RawTree& t) {
  std::vector<Hfs> ms;
  ms.reserve(t.children.size());
  for (const auto& c : t.children) ms.push_back(normalize(c));
  return Hfs::of(std::move(ms));
}

RawTree to_raw(const Hfs& h) {
  RawTree t;
  for (const auto& m : h.members()) t.children.push_back(to_raw(m));
  return t;
}

bool mem(const Hfs& x, const Hfs& y) { return std::binary_search(y.members().begin(), y.members().end(), x); }

bool hfs_eq(const Hfs& x, const Hfs& y) { return x == y; }

Hfs opair(const Hfs& x, const Hfs& y) { return Hfs::of({Hfs::of({x}), Hfs::of({x, y})}); }

Hfs tuple(const std::vector<Hfs>& v) {
  Hfs acc;
  for (std::size_t i = v.size(); i-- > 0;) acc = opair(v[i], acc);
  return acc;
}

Hfs numeral(std::size_t n) {
  std::vector<Hfs> ms;
  Hfs cur;
  for (std::size_t i = 0; i < n; ++i) {
    ms.push_back(cur);
    cur = Hfs::of(ms);
  }
  return cur;
}

std::vector<Hfs> transitive_closure(const std::vector<Hfs>& roots) {
  std::set<Hfs> seen;
  std::vector<Hfs> todo(roots.begin(), roots.end());
  while (!todo.empty()) {
    Hfs h = todo.back();
    todo.pop_back();
    if (!seen.insert(h).second) continue;
    for (const auto& m : h.members()) todo.push_back(m);
  }
  return {seen.begin(), seen.end()};
}

Hfs powerset(const Hfs& h) {
  std::size_t n = h.members().size();
  if (n > kPowersetGuard)
    throw ResourceError("powerset of a set with " + std::to_string(n) + " members exceeds the guard");
  std::vector<Hfs> subsets;
  subsets.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Hfs> part;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) part.push_back(h.members()[i]);
    subsets.push_back(Hfs::of(std::move(part)));
  }
  return Hfs::of(std::move(subsets));
}

MembershipModel build_membership_model(const FinModel& m, const Env& env, std::size_t d_slot) {
  if (!m.functions().empty() || m.relations().size() != 1)
    throw PreconditionError("membership encoding needs a model of exactly one relation and no functions");
  const RelTable& rel = m.relations().begin()->second;
  std::size_t k = m.size();

  std::vector<Hfs> enc(k);
  for (std::size_t x = 0; x < k; ++x) enc[x] = numeral(x);
  Hfs d = numeral(k);
  std::vector<Hfs> tuples;
  for (std::size_t i = 0; i < rel.bits.size(); ++i) {
    if (!rel.bits[i]) continue;
    std::vector<Hfs> v;
    for (Elem e : tuple_at(i, rel.arity, k)) v.push_back(enc[e]);
    tuples.push_back(tuple(v));
  }
  Hfs r = Hfs::of(std::move(tuples));

  MembershipModel out;
  out.universe = transitive_closure({d, r});
  std::size_t n = out.universe.size();
  if (n > kMembershipUniverseGuard)
    throw ResourceError("membership universe of " + std::to_string(n) + " sets exceeds the guard of " +
                        std::to_string(kMembershipUniverseGuard));
  auto index_of = [&](const Hfs& h) {
    auto it = std::lower_bound(out.universe.begin(), out.universe.end(), h);
    if (it == out.universe.end() || !(*it == h)) throw std::logic_error("set missing from universe");
    return static_cast<Elem>(it - out.universe.begin());
  };

  std::vector<std::uint8_t> bits(n * n, 0);
  for (std::size_t b = 0; b < n; ++b)
    for (const auto& member : out.universe[b].members()) bits[index_of(member) * n + b] = 1;
  out.model = FinModel(n);
  out.model.set_relation(kMembership, 2, std::move(bits));

  for (std::size_t x = 0; x < k; ++x) out.element.push_back(index_of(enc[x]));
  out.d = index_of(d);
  out.r = index_of(r);

  out.env.fallback = out.element.at(env.fallback);
  for (Elem v : env.prefix) out.env.prefix.push_back(out.element.at(v));
  out.env.set(d_slot, out.d);
  out.env.set(d_slot + 1, out.r);
  return out;
}

}  // namespace fsat
