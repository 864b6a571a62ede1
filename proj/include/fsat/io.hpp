#pragma once

#include "json.hpp"

#include "fsat/bpcp.hpp"
#include "fsat/semantics.hpp"
#include "fsat/seplog.hpp"

namespace fsat {

/// Insertion-ordered so that symbol order in files is preserved.
using Json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

/// Parses a file or throws InputError(Format).
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);

Signature sig_from_json(const Json& j);
Json sig_to_json(const Signature& sig);

/// If `sig` is given, every symbol must be present with its arity.
FinModel model_from_json(const Json& j, const Signature* sig = nullptr);
Json model_to_json(const FinModel& m);

Env env_from_json(const Json& j);
Json env_to_json(const Env& env);

BpcpInstance bpcp_from_json(const Json& j);
Json bpcp_to_json(const BpcpInstance& r);

Heap heap_from_json(const Json& j);
Json heap_to_json(const Heap& h);
Stack stack_from_json(const Json& j);
Json stack_to_json(const Stack& s);

}  // namespace fsat
