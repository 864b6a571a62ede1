// Command-line front end. JSON results go to stdout, diagnostics to stderr.
// Exit codes: 0 sat/success, 1 unsat/none found, 2 input error, 3 resource guard.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fsat/bisim.hpp"
#include "fsat/bpcp.hpp"
#include "fsat/classify.hpp"
#include "fsat/io.hpp"
#include "fsat/monadic.hpp"
#include "fsat/passes.hpp"
#include "fsat/search.hpp"
#include "fsat/seplog.hpp"

using namespace fsat;

namespace {

enum Exit { kSat = 0, kNone = 1, kInput = 2, kResource = 3 };

Json load(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse_json(arg);
  return read_json_file(arg);
}

std::string read_text(const std::string& formula, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw InputError(InputError::Kind::Format, "cannot read '" + file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (formula.empty()) throw InputError(InputError::Kind::Format, "no formula given");
  return formula;
}

Json header(const std::string& command) { return Json{{"format", kFormatVersion}, {"command", command}}; }

int emit(Json j, int code) {
  std::cout << j.dump(2) << "\n";
  return code;
}

Json witness_json(const Interpretation& w) {
  return Json{{"model", model_to_json(w.model)}, {"env", env_to_json(w.env)}};
}

int emit_search(const std::string& command, const SearchOutcome& out) {
  Json j = header(command);
  j["definitive"] = out.sat();
  if (out.sat()) {
    j["result"] = "sat";
    j["size"] = out.bound;
    j["witness"] = witness_json(*out.witness);
    return emit(j, kSat);
  }
  j["result"] = "unsat_up_to";
  j["bound"] = out.bound;
  return emit(j, kNone);
}

Json step_json(const ReductionStep& s) {
  return Json{{"name", s.name},
              {"target_signature", sig_to_json(s.target_sig)},
              {"formula", print_formula(s.target)},
              {"reserved", s.reserved}};
}

// Inputs shared by most subcommands.
struct Common {
  std::string sig, formula, formula_file, model, env;

  void add_sig(CLI::App* c) { c->add_option("--sig", sig, "signature JSON file or inline JSON")->required(); }
  void add_formula(CLI::App* c) {
    c->add_option("--formula", formula, "formula text");
    c->add_option("--formula-file", formula_file, "file holding the formula");
  }
  void add_model(CLI::App* c, bool required) {
    auto* o = c->add_option("--model", model, "model JSON file or inline JSON");
    if (required) o->required();
    c->add_option("--env", env, "environment JSON file or inline JSON");
  }

  Signature signature() const { return sig_from_json(load(sig)); }
  Formula parsed(const Signature& s) const { return parse_formula(read_text(formula, formula_file), s); }
  Interpretation interpretation(const Signature& s) const {
    return Interpretation{model_from_json(load(model), &s), env.empty() ? Env{} : env_from_json(load(env))};
  }
};

int run(int argc, char** argv) {
  CLI::App app{"finite satisfiability workbench"};
  app.require_subcommand(1);
  Common c;
  std::uint64_t max_candidates = SearchOptions{}.max_candidates;

  auto* check = app.add_subcommand("check", "evaluate a formula in a model");
  c.add_sig(check);
  c.add_formula(check);
  c.add_model(check, true);

  std::size_t max_size = 3, min_size = 1;
  auto* solve = app.add_subcommand("solve", "bounded search for a finite model");
  c.add_sig(solve);
  c.add_formula(solve);
  solve->add_option("--max-size", max_size, "largest domain size")->check(CLI::PositiveNumber);
  solve->add_option("--min-size", min_size, "smallest domain size")->check(CLI::PositiveNumber);
  solve->add_option("--max-candidates", max_candidates, "ceiling on candidates per domain size");

  std::size_t fuel = 3;
  auto* enumerate = app.add_subcommand("enumerate", "semi-decision with fuel");
  c.add_sig(enumerate);
  c.add_formula(enumerate);
  enumerate->add_option("--fuel", fuel, "largest domain size tried")->check(CLI::PositiveNumber);
  enumerate->add_option("--max-candidates", max_candidates, "ceiling on candidates per domain size");

  std::size_t max_predicates = MonadicOptions{}.max_predicates;
  auto* monadic = app.add_subcommand("decide-monadic", "decide a monadic or propositional formula");
  c.add_sig(monadic);
  c.add_formula(monadic);
  monadic->add_option("--max-predicates", max_predicates, "guard on base predicates");

  auto* minimize = app.add_subcommand("minimize", "quotient a model by indistinguishability");
  c.add_sig(minimize);
  c.add_formula(minimize);
  c.add_model(minimize, true);

  std::string pass_name, eqsym, target_sig, direction;
  std::size_t arity = 0;
  auto* pass = app.add_subcommand("pass", "apply one reduction pass");
  pass->add_option("name", pass_name, "pass name")->required()->check(CLI::IsMember(pass_names()));
  c.add_sig(pass);
  c.add_formula(pass);
  c.add_model(pass, false);
  pass->add_option("--eqsym", eqsym, "equality symbol for add_congruence");
  pass->add_option("--arity", arity, "arity for uniformize_arity and rel2_to_fun");
  pass->add_option("--target-sig", target_sig, "target signature for embed_padding");
  pass->add_option("--direction", direction, "transport the given model forward or backward")
      ->check(CLI::IsMember({"forward", "backward"}));

  std::string pipeline_name;
  auto* pipeline = app.add_subcommand("pipeline", "run a pass pipeline");
  pipeline->add_option("name", pipeline_name, "pipeline name")->required()->check(CLI::IsMember({"to-binary"}));
  c.add_sig(pipeline);
  c.add_formula(pipeline);
  c.add_model(pipeline, false);

  std::string instance, bpcp_action;
  std::size_t max_len = 8, bound_n = 1;
  auto* bpcp = app.add_subcommand("bpcp", "binary Post correspondence tools");
  bpcp->add_option("action", bpcp_action, "solve, encode, build-model or extract")
      ->required()
      ->check(CLI::IsMember({"solve", "encode", "build-model", "extract"}));
  bpcp->add_option("--instance", instance, "card list JSON file or inline JSON")->required();
  bpcp->add_option("--max-len", max_len, "longest solution tried");
  bpcp->add_option("--n", bound_n, "string length bound of the built model");
  bpcp->add_option("--model", c.model, "model for extract");
  bpcp->add_option("--env", c.env, "environment for extract");

  std::string sl_action, heap, stack, sl_formula;
  std::optional<std::size_t> wand_bound;
  bool full_sl = false;
  auto* seplog = app.add_subcommand("seplog", "separation logic tools");
  seplog->add_option("action", sl_action, "encode or check")->required()->check(CLI::IsMember({"encode", "check"}));
  seplog->add_option("--sig", c.sig, "signature with one binary relation (encode)");
  seplog->add_option("--formula", sl_formula, "formula text");
  seplog->add_option("--formula-file", c.formula_file, "file holding the formula");
  seplog->add_flag("--sl", full_sl, "emit points-to form instead of the minimal fragment (encode)");
  seplog->add_option("--heap", heap, "heap JSON file or inline JSON (check)");
  seplog->add_option("--stack", stack, "stack JSON file or inline JSON (check)");
  seplog->add_option("--wand-bound", wand_bound, "largest extension heap for magic wands");

  auto* classify = app.add_subcommand("classify", "decidability verdict for a signature");
  c.add_sig(classify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  if (check->parsed()) {
    Signature s = c.signature();
    Formula phi = c.parsed(s);
    Interpretation in = c.interpretation(s);
    bool v = eval_formula(in.model, in.env, phi);
    Json j = header("check");
    j["definitive"] = true;
    j["result"] = v ? "sat" : "unsat";
    return emit(j, v ? kSat : kNone);
  }
  if (solve->parsed() || enumerate->parsed()) {
    Signature s = c.signature();
    Formula phi = c.parsed(s);
    SearchOptions opts;
    opts.max_candidates = max_candidates;
    if (enumerate->parsed()) return emit_search("enumerate", enumerate_fsat(phi, s, fuel, opts));
    for (std::size_t k = min_size; k <= max_size; ++k) {
      SearchOutcome out = decide_fixed_domain(phi, s, k, opts);
      if (out.sat()) return emit_search("solve", out);
    }
    SearchOutcome none;
    none.kind = SearchOutcome::Kind::UnsatUpTo;
    none.bound = max_size;
    return emit_search("solve", none);
  }
  if (monadic->parsed()) {
    Signature s = c.signature();
    Formula phi = c.parsed(s);
    MonadicOptions opts;
    opts.max_predicates = max_predicates;
    MonadicResult r = decide_monadic_full(phi, s, opts);
    Json j = header("decide-monadic");
    j["definitive"] = true;
    j["result"] = r.sat ? "sat" : "unsat";
    j["base_predicates"] = r.base_predicates;
    j["steps"] = r.steps;
    if (r.sat) j["witness"] = witness_json(*r.witness);
    return emit(j, r.sat ? kSat : kNone);
  }
  if (minimize->parsed()) {
    Signature s = c.signature();
    Formula phi = c.parsed(s);
    Interpretation in = c.interpretation(s);
    Interpretation out = minimize_model(in.model, in.env, phi);
    Json j = header("minimize");
    j["definitive"] = true;
    j["result"] = "success";
    j["original_size"] = in.model.size();
    j["size"] = out.model.size();
    j["witness"] = witness_json(out);
    j["holds"] = eval_formula(out.model, out.env, phi);
    return emit(j, kSat);
  }
  if (pass->parsed()) {
    Signature s = c.signature();
    Formula phi = c.parsed(s);
    PassArgs args;
    if (!eqsym.empty()) args.eqsym = eqsym;
    if (arity) args.arity = arity;
    if (!target_sig.empty()) args.target_sig = sig_from_json(load(target_sig));
    ReductionStep step = run_pass(pass_name, phi, s, args);
    Json j = header("pass");
    j["definitive"] = true;
    j["result"] = "success";
    j["step"] = step_json(step);
    if (!c.model.empty()) {
      bool fwd = direction != "backward";
      Interpretation in = c.interpretation(fwd ? s : step.target_sig);
      Interpretation out = fwd ? step.forward(in) : step.backward(in);
      j["transported"] = witness_json(out);
      j["holds"] = eval_formula(out.model, out.env, fwd ? step.target : step.source);
    }
    return emit(j, kSat);
  }
  if (pipeline->parsed()) {
    Signature s = c.signature();
    Formula phi = c.parsed(s);
    auto steps = pipeline_to_binary(phi, s);
    Json j = header("pipeline");
    j["definitive"] = true;
    j["result"] = "success";
    j["steps"] = Json::array();
    for (const auto& st : steps) j["steps"].push_back(step_json(st));
    j["formula"] = print_formula(steps.back().target);
    j["target_signature"] = sig_to_json(steps.back().target_sig);
    if (!c.model.empty()) {
      Interpretation out = forward_through(steps, c.interpretation(s));
      j["transported"] = witness_json(out);
      j["holds"] = eval_formula(out.model, out.env, steps.back().target);
    }
    return emit(j, kSat);
  }
  if (bpcp->parsed()) {
    BpcpInstance r = bpcp_from_json(load(instance));
    Json j = header("bpcp " + bpcp_action);
    if (bpcp_action == "solve") {
      auto sol = solve_bpcp(r, max_len);
      j["definitive"] = sol.has_value();
      j["result"] = sol ? "sat" : "none_up_to";
      if (sol) j["solution"] = *sol;
      j["max_len"] = max_len;
      return emit(j, sol ? kSat : kNone);
    }
    if (bpcp_action == "encode") {
      j["definitive"] = true;
      j["result"] = "success";
      j["signature"] = sig_to_json(bpcp_signature());
      j["formula"] = print_formula(encode_phi(r));
      return emit(j, kSat);
    }
    if (bpcp_action == "build-model") {
      Interpretation b = build_Bn(r, bound_n);
      bool v = eval_formula(b.model, b.env, encode_phi(r));
      j["definitive"] = true;
      j["result"] = v ? "sat" : "unsat";
      j["witness"] = witness_json(b);
      Json labels = Json::array();
      for (std::size_t i = 0; i < b.model.size(); ++i) {
        auto str = bn_string(i);
        labels.push_back(str ? Json(*str) : Json(nullptr));
      }
      j["elements"] = labels;
      return emit(j, v ? kSat : kNone);
    }
    if (c.model.empty()) throw InputError(InputError::Kind::Format, "extract needs --model");
    Signature s = bpcp_signature();
    Interpretation in = c.interpretation(s);
    j["definitive"] = true;
    j["result"] = "sat";
    j["solution"] = extract_solution(r, in.model, in.env);
    return emit(j, kSat);
  }
  if (seplog->parsed()) {
    std::string text = read_text(sl_formula, c.formula_file);
    if (sl_action == "encode") {
      if (c.sig.empty()) throw InputError(InputError::Kind::Format, "encode needs --sig");
      Signature s = c.signature();
      SlFormula enc = encode_fsat_to_msl(parse_formula(text, s), s);
      if (full_sl) enc = msl_to_sl(enc);
      Json j = header("seplog encode");
      j["definitive"] = true;
      j["result"] = "success";
      j["formula"] = print_sl(enc);
      return emit(j, kSat);
    }
    if (heap.empty()) throw InputError(InputError::Kind::Format, "check needs --heap");
    Heap h = heap_from_json(load(heap));
    Stack st = stack.empty() ? Stack{} : stack_from_json(load(stack));
    SlFormula phi = parse_sl(text);
    SlEvalOptions opts;
    opts.wand_bound = wand_bound;
    bool v = eval_sl(h, st, phi, opts);
    Json j = header("seplog check");
    j["definitive"] = !uses_wand(phi);
    j["result"] = v ? "sat" : "unsat";
    return emit(j, v ? kSat : kNone);
  }
  Verdict v = classify_signature(c.signature());
  Json j = header("classify");
  j["definitive"] = true;
  j["verdict"] = v.decidable() ? "decidable" : "undecidable";
  j["case"] = case_label(v.which);
  j["enumerable"] = v.enumerable;
  j["note"] = v.note;
  return emit(j, kSat);
}

int fail(int code, const std::string& kind, const std::string& what, std::optional<std::size_t> pos = {}) {
  std::cerr << "error: " << what << "\n";
  Json j{{"format", kFormatVersion}, {"definitive", false}, {"error", kind}, {"message", what}};
  if (pos) j["position"] = *pos;
  std::cout << j.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    static const char* kinds[] = {"syntax", "unknown_symbol", "arity_mismatch", "format"};
    std::optional<std::size_t> pos;
    if (e.kind() != InputError::Kind::Format) pos = e.position();
    return fail(kInput, kinds[static_cast<int>(e.kind())], e.what(), pos);
  } catch (const PreconditionError& e) {
    return fail(kInput, "precondition", e.what());
  } catch (const ResourceError& e) {
    return fail(kResource, "resource", e.what());
  }
}
