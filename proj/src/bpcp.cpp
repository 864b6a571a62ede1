#include "fsat/bpcp.hpp"

#include <functional>
#include <unordered_map>

namespace fsat {

void validate_instance(const BpcpInstance& r) {
  for (const auto& c : r)
    for (const auto* s : {&c.top, &c.bottom})
      if (s->find_first_not_of("01") != std::string::npos)
        throw InputError(InputError::Kind::Format, "card string '" + *s + "' is not over {0,1}");
}

namespace {

bool is_prefix(const BitString& p, const BitString& s, std::size_t at) {
  return s.size() - at >= p.size() && s.compare(at, p.size(), p) == 0;
}

class Deriver {
 public:
  explicit Deriver(const BpcpInstance& r) : r_(r) {}

  bool operator()(const BitString& s, const BitString& t) { return go(s, 0, t, 0); }

 private:
  // Whether the suffixes s[i..] / t[j..] are derivable. Cards with both sides
  // empty never shrink the pair, and the base rule already covers them.
  bool go(const BitString& s, std::size_t i, const BitString& t, std::size_t j) {
    std::string key = s.substr(i) + "/" + t.substr(j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool ok = false;
    for (const auto& c : r_)
      if (s.size() - i == c.top.size() && t.size() - j == c.bottom.size() && is_prefix(c.top, s, i) &&
          is_prefix(c.bottom, t, j)) {
        ok = true;
        break;
      }
    for (std::size_t n = 0; n < r_.size() && !ok; ++n) {
      const Card& c = r_[n];
      if (c.top.empty() && c.bottom.empty()) continue;
      if (is_prefix(c.top, s, i) && is_prefix(c.bottom, t, j))
        ok = go(s, i + c.top.size(), t, j + c.bottom.size());
    }
    memo_.emplace(std::move(key), ok);
    return ok;
  }

  const BpcpInstance& r_;
  std::unordered_map<std::string, bool> memo_;
};

}  // namespace

bool derivable(const BpcpInstance& r, const BitString& s, const BitString& t) {
  return Deriver(r)(s, t);
}

std::optional<BitString> solve_bpcp(const BpcpInstance& r, std::size_t max_len) {
  Deriver d(r);
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= 63) throw ResourceError("BPCP search length too large");
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      BitString s(len, '0');
      for (std::size_t i = 0; i < len; ++i)
        if (v >> (len - 1 - i) & 1) s[i] = '1';
      if (d(s, s)) return s;
    }
  }
  return std::nullopt;
}

Signature bpcp_signature() {
  return Signature({{"star", 0}, {"e", 0}, {"ftt", 1}, {"fff", 1}}, {{"P", 2}, {"prec", 2}, {"eq", 2}});
}

namespace {

// s-expression text for s̄ +++ tail.
std::string encode_text(const BitString& s, const std::string& tail) {
  std::string out = tail;
  for (auto it = s.rbegin(); it != s.rend(); ++it) out = std::string("(") + (*it == '1' ? "ftt " : "fff ") + out + ")";
  return out;
}

}  // namespace

Formula encode_phi(const BpcpInstance& r) {
  validate_instance(r);
  std::string phi_p = "(forall x (forall y (-> (P x y) (and (not (eq x star)) (not (eq y star))))))";
  std::string phi_prec =
      "(and (forall x (not (prec x x)))"
      " (forall x (forall y (forall z (-> (prec x y) (-> (prec y z) (prec x z)))))))";
  std::string phi_f =
      "(and (eq (ftt star) star) (eq (fff star) star)"
      " (forall x (not (eq (ftt x) e)))"
      " (forall x (not (eq (fff x) e)))"
      " (forall x (forall y (-> (not (eq (ftt x) star)) (-> (eq (ftt x) (ftt y)) (eq x y)))))"
      " (forall x (forall y (-> (not (eq (fff x) star)) (-> (eq (fff x) (fff y)) (eq x y)))))"
      " (forall x (forall y (-> (eq (ftt x) (fff y)) (and (eq (ftt x) star) (eq (fff y) star))))))";
  std::string smaller = "(or (and (prec u x) (eq v y)) (and (prec v y) (eq u x)) (and (prec u x) (prec v y)))";
  std::vector<std::string> cases;
  for (const auto& c : r) {
    std::string base = "(and (eq x " + encode_text(c.top, "e") + ") (eq y " + encode_text(c.bottom, "e") + "))";
    std::string step = "(exists u (exists v (and (P u v) (eq x " + encode_text(c.top, "u") + ") (eq y " +
                       encode_text(c.bottom, "v") + ") " + smaller + ")))";
    cases.push_back("(or " + base + " " + step + ")");
  }
  std::string inversion;
  if (cases.empty())
    inversion = "false";
  else if (cases.size() == 1)
    inversion = cases[0];
  else {
    inversion = "(or";
    for (const auto& c : cases) inversion += " " + c;
    inversion += ")";
  }
  std::string phi_inv = "(forall x (forall y (-> (P x y) " + inversion + ")))";
  std::string text = "(and " + phi_p + " " + phi_prec + " " + phi_f + " " + phi_inv + " (exists x (P x x)))";
  return parse_formula(text, bpcp_signature());
}

std::size_t bn_index(const BitString& s) {
  if (s.size() >= 63) throw ResourceError("string too long for an element index");
  std::size_t v = std::size_t{1} << s.size();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '1') v += std::size_t{1} << (s.size() - 1 - i);
  return v;
}

std::optional<BitString> bn_string(std::size_t index) {
  if (index == 0) return std::nullopt;
  std::size_t len = 0;
  while ((index >> (len + 1)) != 0) ++len;
  BitString s(len, '0');
  for (std::size_t i = 0; i < len; ++i)
    if (index >> (len - 1 - i) & 1) s[i] = '1';
  return s;
}

Interpretation build_Bn(const BpcpInstance& r, std::size_t n) {
  validate_instance(r);
  if (n > 10) throw ResourceError("model bound above 10 would exceed the table guard");
  std::size_t k = std::size_t{1} << (n + 1);
  std::vector<BitString> str(k);
  for (std::size_t i = 1; i < k; ++i) str[i] = *bn_string(i);

  FinModel m(k);
  m.set_function("star", 0, {0});
  m.set_function("e", 0, {static_cast<Elem>(bn_index(""))});
  for (char b : {'1', '0'}) {
    std::vector<Elem> tab(k, 0);
    for (std::size_t i = 1; i < k; ++i)
      if (str[i].size() < n) tab[i] = static_cast<Elem>(bn_index(std::string(1, b) + str[i]));
    m.set_function(b == '1' ? "ftt" : "fff", 1, std::move(tab));
  }
  Deriver d(r);
  std::vector<std::uint8_t> p(k * k, 0), prec(k * k, 0), eq(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    eq[i * k + i] = 1;
    if (i == 0) continue;
    for (std::size_t j = 1; j < k; ++j) {
      const auto& s = str[i];
      const auto& t = str[j];
      p[i * k + j] = d(s, t);
      prec[i * k + j] = s.size() < t.size() && t.compare(t.size() - s.size(), s.size(), s) == 0;
    }
  }
  m.set_relation("P", 2, std::move(p));
  m.set_relation("prec", 2, std::move(prec));
  m.set_relation("eq", 2, std::move(eq));
  Env env;
  return Interpretation{std::move(m), env};
}

BitString extract_solution(const BpcpInstance& r, const FinModel& m, const Env& env) {
  validate_instance(r);
  std::size_t k = m.size();
  Signature sig = bpcp_signature();
  for (const auto& f : sig.functions())
    if (!m.function(f.name) || m.function(f.name)->arity != f.arity)
      throw PreconditionError("model lacks function '" + f.name + "'");
  for (const auto& p : sig.relations())
    if (!m.relation(p.name) || m.relation(p.name)->arity != p.arity)
      throw PreconditionError("model lacks relation '" + p.name + "'");
  for (Elem x = 0; x < k; ++x)
    for (Elem y = 0; y < k; ++y)
      if (m.holds("eq", {x, y}) != (x == y)) throw PreconditionError("eq is not interpreted as equality");
  if (!eval_formula(m, env, encode_phi(r))) throw PreconditionError("model does not satisfy the BPCP encoding");

  const auto& ftt = m.function("ftt")->table;
  const auto& fff = m.function("fff")->table;
  Elem e = m.function("e")->table[0];
  auto enc = [&](const BitString& s, Elem tail) {
    Elem v = tail;
    for (auto it = s.rbegin(); it != s.rend(); ++it) v = *it == '1' ? ftt[v] : fff[v];
    return v;
  };
  auto prec = [&](Elem a, Elem b) { return m.holds("prec", {a, b}); };
  auto smaller = [&](Elem u, Elem v, Elem x, Elem y) {
    return (prec(u, x) && v == y) || (prec(v, y) && u == x) || (prec(u, x) && prec(v, y));
  };

  // Descending chains under the pair order are duplicate-free, so k^2 + 1
  // steps always suffice on a genuine model.
  std::function<std::pair<BitString, BitString>(Elem, Elem, std::size_t)> decode =
      [&](Elem x, Elem y, std::size_t fuel) -> std::pair<BitString, BitString> {
    if (fuel == 0) throw PreconditionError("extraction ran out of fuel");
    for (const auto& c : r)
      if (enc(c.top, e) == x && enc(c.bottom, e) == y) return {c.top, c.bottom};
    for (const auto& c : r)
      for (Elem u = 0; u < k; ++u)
        for (Elem v = 0; v < k; ++v)
          if (m.holds("P", {u, v}) && enc(c.top, u) == x && enc(c.bottom, v) == y && smaller(u, v, x, y)) {
            auto [s, t] = decode(u, v, fuel - 1);
            return {c.top + s, c.bottom + t};
          }
    throw PreconditionError("P pair has no decomposition");
  };

  for (Elem x = 0; x < k; ++x)
    if (m.holds("P", {x, x})) {
      auto [s, t] = decode(x, x, k * k + 1);
      if (s != t || !derivable(r, s, t)) throw std::logic_error("extracted string is not a solution");
      return s;
    }
  throw PreconditionError("no element x with P x x");
}

}  // namespace fsat
