#include "fsat/io.hpp"

#include <fstream>
#include <sstream>

namespace fsat {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError(InputError::Kind::Format, what); }

void check_version(const Json& j) {
  if (j.is_object() && j.contains("format") && j["format"] != kFormatVersion)
    bad("unsupported format version " + j["format"].dump());
}

std::uint64_t natural(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(what + " must be a natural number");
  return j.get<std::uint64_t>();
}

std::vector<Symbol> symbols(const Json& j, const std::string& what) {
  std::vector<Symbol> out;
  if (j.is_null()) return out;
  if (!j.is_object()) bad(what + " must be an object of name: arity");
  for (const auto& [name, ar] : j.items()) out.push_back({name, natural(ar, "arity of '" + name + "'")});
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Signature sig_from_json(const Json& j) {
  if (!j.is_object()) bad("signature must be a JSON object");
  check_version(j);
  try {
    return Signature(symbols(j.value("functions", Json()), "functions"),
                     symbols(j.value("relations", Json()), "relations"));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    bad(std::string("invalid signature: ") + e.what());
  }
}

Json sig_to_json(const Signature& sig) {
  Json j = {{"format", kFormatVersion}, {"functions", Json::object()}, {"relations", Json::object()}};
  for (const auto& f : sig.functions()) j["functions"][f.name] = f.arity;
  for (const auto& r : sig.relations()) j["relations"][r.name] = r.arity;
  return j;
}

FinModel model_from_json(const Json& j, const Signature* sig) {
  if (!j.is_object()) bad("model must be a JSON object");
  check_version(j);
  if (!j.contains("size")) bad("model lacks 'size'");
  std::size_t k = natural(j["size"], "model size");
  if (k == 0) bad("model size must be positive");
  FinModel m(k);
  // Without a signature the arity is read off the table length; a one
  // element domain makes every arity look like 0.
  auto arity_of = [&](std::size_t len, const std::string& name) {
    std::size_t a = 0, n = 1;
    while (k > 1 && n < len) {
      n *= k;
      ++a;
    }
    if (n != len) bad("table of '" + name + "' has length " + std::to_string(len) + ", not a power of the size");
    return a;
  };
  auto declared = [&](const std::string& name, bool fn, std::size_t len) -> std::size_t {
    if (sig) {
      auto a = fn ? sig->function_arity(name) : sig->relation_arity(name);
      if (!a) bad("model symbol '" + name + "' is not in the signature");
      if (len != table_length(k, *a)) bad("table of '" + name + "' has the wrong length");
      return *a;
    }
    return arity_of(len, name);
  };
  if (j.contains("functions"))
    for (const auto& [name, tab] : j["functions"].items()) {
      if (!tab.is_array()) bad("table of '" + name + "' must be an array");
      std::vector<Elem> t;
      for (const auto& v : tab) {
        auto x = natural(v, "entry of '" + name + "'");
        if (x >= k) bad("entry of '" + name + "' is outside the domain");
        t.push_back(static_cast<Elem>(x));
      }
      std::size_t a = declared(name, true, t.size());
      m.set_function(name, a, std::move(t));
    }
  if (j.contains("relations"))
    for (const auto& [name, tab] : j["relations"].items()) {
      if (!tab.is_array()) bad("table of '" + name + "' must be an array");
      std::vector<std::uint8_t> t;
      for (const auto& v : tab) {
        if (v.is_boolean())
          t.push_back(v.get<bool>());
        else if (v == 0 || v == 1)
          t.push_back(v.get<int>() != 0);
        else
          bad("entry of '" + name + "' must be 0, 1 or a boolean");
      }
      std::size_t a = declared(name, false, t.size());
      m.set_relation(name, a, std::move(t));
    }
  if (sig) {
    for (const auto& f : sig->functions())
      if (!m.function(f.name)) bad("model lacks function '" + f.name + "'");
    for (const auto& r : sig->relations())
      if (!m.relation(r.name)) bad("model lacks relation '" + r.name + "'");
  }
  return m;
}

Json model_to_json(const FinModel& m) {
  Json j = {{"format", kFormatVersion}, {"size", m.size()}, {"functions", Json::object()},
            {"relations", Json::object()}};
  for (const auto& [name, t] : m.functions()) j["functions"][name] = t.table;
  for (const auto& [name, t] : m.relations()) {
    Json bits = Json::array();
    for (auto b : t.bits) bits.push_back(b ? 1 : 0);
    j["relations"][name] = bits;
  }
  return j;
}

Env env_from_json(const Json& j) {
  Env env;
  if (j.is_array()) {
    for (const auto& v : j) env.prefix.push_back(static_cast<Elem>(natural(v, "env entry")));
    return env;
  }
  if (!j.is_object()) bad("env must be an object or an array");
  check_version(j);
  if (j.contains("prefix")) {
    if (!j["prefix"].is_array()) bad("env prefix must be an array");
    for (const auto& v : j["prefix"]) env.prefix.push_back(static_cast<Elem>(natural(v, "env entry")));
  }
  if (j.contains("default")) env.fallback = static_cast<Elem>(natural(j["default"], "env default"));
  return env;
}

Json env_to_json(const Env& env) {
  return {{"format", kFormatVersion}, {"prefix", env.prefix}, {"default", env.fallback}};
}

BpcpInstance bpcp_from_json(const Json& j) {
  const Json* cards = &j;
  if (j.is_object()) {
    check_version(j);
    if (!j.contains("cards")) bad("BPCP instance lacks 'cards'");
    cards = &j["cards"];
  }
  if (!cards->is_array()) bad("BPCP instance must be a list of pairs");
  BpcpInstance r;
  for (const auto& c : *cards) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string())
      bad("each card must be a pair of bit strings");
    r.push_back({c[0].get<std::string>(), c[1].get<std::string>()});
  }
  validate_instance(r);
  return r;
}

Json bpcp_to_json(const BpcpInstance& r) {
  Json cards = Json::array();
  for (const auto& c : r) cards.push_back({c.top, c.bottom});
  return cards;
}

namespace {

SlVal sl_val(const Json& v) {
  if (v.is_null()) return std::nullopt;
  return natural(v, "heap value");
}

Json sl_json(const SlVal& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Heap heap_from_json(const Json& j) {
  const Json* cells = &j;
  if (j.is_object()) {
    check_version(j);
    if (!j.contains("heap")) bad("heap object lacks 'heap'");
    cells = &j["heap"];
  }
  if (!cells->is_array()) bad("heap must be a list of [addr, [v1, v2]]");
  Heap h;
  for (const auto& c : *cells) {
    if (!c.is_array() || c.size() != 2 || !c[1].is_array() || c[1].size() != 2)
      bad("heap cell must be [addr, [v1, v2]]");
    h.push_back({natural(c[0], "heap address"), sl_val(c[1][0]), sl_val(c[1][1])});
  }
  try {
    return normalize_heap(std::move(h));
  } catch (const PreconditionError& e) {
    bad(e.what());
  }
}

Json heap_to_json(const Heap& h) {
  Json out = Json::array();
  for (const auto& c : h) out.push_back({c.addr, {sl_json(c.first), sl_json(c.second)}});
  return out;
}

Stack stack_from_json(const Json& j) {
  Stack s;
  const Json* prefix = &j;
  if (j.is_object()) {
    check_version(j);
    prefix = j.contains("prefix") ? &j["prefix"] : nullptr;
    if (j.contains("default")) s.fallback = sl_val(j["default"]);
  }
  if (prefix) {
    if (!prefix->is_array()) bad("stack prefix must be an array");
    for (const auto& v : *prefix) s.prefix.push_back(sl_val(v));
  }
  return s;
}

Json stack_to_json(const Stack& s) {
  Json prefix = Json::array();
  for (const auto& v : s.prefix) prefix.push_back(sl_json(v));
  return {{"format", kFormatVersion}, {"prefix", prefix}, {"default", sl_json(s.fallback)}};
}

}  // namespace fsat
