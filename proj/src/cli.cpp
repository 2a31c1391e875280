#include "mms/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mms/errors.hpp"
#include "mms/exact_oracles.hpp"
#include "mms/generators.hpp"
#include "mms/inapprox.hpp"
#include "mms/json_io.hpp"
#include "mms/multi_category.hpp"
#include "mms/ordered.hpp"
#include "mms/single_chores.hpp"
#include "mms/single_goods.hpp"
#include "mms/verify.hpp"

namespace mms::cli {

using nlohmann::json;

namespace {

/// Result of a command: a JSON document for stdout (or --out) and an exit code.
struct Outcome {
  json doc;
  int code = kOk;
};

int code_for(const std::exception& e) {
  if (dynamic_cast<const GuardExceeded*>(&e)) return kGuardExceeded;
  if (dynamic_cast<const InternalInvariantError*>(&e)) return kGuaranteeFailure;
  if (dynamic_cast<const InvalidInstance*>(&e) || dynamic_cast<const PreconditionError*>(&e)) {
    return kValidationError;
  }
  if (dynamic_cast<const json::exception*>(&e)) return kValidationError;
  return kIoError;
}

Instance load_instance(const std::string& path) {
  Instance inst = instance_from_json(read_json_file(path));
  require_valid(inst);
  return inst;
}

json optional_rational(const std::optional<Rational>& r) { return r ? rational_report(*r) : json(nullptr); }

AlgorithmResult run_ordered(const Instance& inst, const std::string& algo, const Rational& alpha, bool check,
                            Allocation& lifted) {
  const OrderedReduction red = to_ordered(inst);
  const Instance& ord = red.ordered_instance;
  AlgorithmResult res;
  if (algo == "single-goods" || algo == "single-chores") {
    BagFillingOptions opts;
    opts.check_invariants = check;
    res = algo == "single-goods" ? approx_goods(ord, alpha, opts) : approx_chores(ord, alpha, opts);
  } else {
    CategorizedOptions opts;
    opts.check_invariants = check;
    res = algo == "multi-goods" ? approx_categorized_goods(ord, alpha, opts)
                                : approx_categorized_chores(ord, alpha, opts);
  }
  lifted = lift_allocation(red, res.allocation);
  return res;
}

Rational approx_alpha(const Instance& inst, const Rational& eps) {
  if (all_nonnegative(inst)) return Rational(1) - eps;
  if (all_nonpositive(inst)) return Rational(1) + eps;
  throw PreconditionError("unsupported kind: approximation needs values of one sign");
}

std::string resolve_auto(const Instance& inst) {
  if (inst.categories.size() == 1 && bivalued_profile(inst)) return "bivalued";
  if (inst.kind == Kind::Mixed) throw PreconditionError("unsupported kind: mixed values that are not bivalued");
  if (identical_agents(inst)) return "fptas";
  const bool goods = inst.kind == Kind::Goods;
  if (inst.categories.size() == 1) return goods ? "single-goods" : "single-chores";
  return goods ? "multi-goods" : "multi-chores";
}

}  // namespace

SolveOutcome solve_instance(const Instance& inst, const std::string& selector, const std::optional<Rational>& alpha,
                            const Rational& eps, bool check_invariants) {
  require_valid(inst);
  SolveOutcome out;
  out.algorithm = selector == "auto" ? resolve_auto(inst) : selector;
  const std::string& algo = out.algorithm;
  const int n = inst.n_agents;
  out.mu_hat.assign(n, std::nullopt);

  if (algo == "single-goods" || algo == "single-chores" || algo == "multi-goods" || algo == "multi-chores") {
    Rational a;
    if (algo == "single-goods") a = default_alpha_goods(n);
    if (algo == "single-chores") a = default_alpha_chores(n);
    if (algo == "multi-goods") a = default_alpha_categorized_goods(n);
    if (algo == "multi-chores") a = default_alpha_categorized_chores(n);
    out.alpha = alpha.value_or(a);
    const AlgorithmResult res = run_ordered(inst, algo, out.alpha, check_invariants, out.allocation);
    out.mu_hat = res.mu_hat;
    out.reductions = res.reductions;
  } else if (algo == "identical-dp") {
    const DpResult dp = mms_identical_dp(inst);
    out.alpha = alpha.value_or(Rational(1));
    out.allocation = dp.partition;
    out.mu_hat.assign(n, dp.value);
  } else if (algo == "fptas") {
    out.alpha = alpha.value_or(approx_alpha(inst, eps));
    out.allocation = fptas_identical(inst, eps).partition;
  } else if (algo == "almost-identical") {
    out.alpha = alpha.value_or(approx_alpha(inst, eps));
    out.allocation = almost_identical(inst, eps);
  } else if (algo == "bivalued") {
    out.alpha = alpha.value_or(Rational(1));
    out.allocation = bivalued_exact(inst);
  } else {
    throw PreconditionError("unknown algorithm: " + selector);
  }
  return out;
}

namespace {

Outcome solve_report(const Instance& inst, const std::string& selector, const std::optional<Rational>& alpha,
                     const Rational& eps, bool check, bool oracle, double guard, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const SolveOutcome s = solve_instance(inst, selector, alpha, eps, check);
  const auto stop = std::chrono::steady_clock::now();

  Outcome o;
  json& r = o.doc;
  r["algorithm"] = s.algorithm;
  r["alpha"] = rational_report(s.alpha);
  r["reductions"] = s.reductions;
  r["allocation"] = allocation_to_json(s.allocation);
  std::optional<VerifyReport> vr;
  if (oracle) vr = verify_alpha_mms(inst, s.allocation, s.alpha, mms_values_bruteforce(inst, guard));
  r["agents"] = json::array();
  for (int i = 0; i < inst.n_agents; ++i) {
    json a;
    a["agent"] = i;
    a["bundle"] = s.allocation.bundles[i];
    a["value"] = rational_report(bundle_value(inst, i, s.allocation.bundles[i]));
    a["mu_hat"] = optional_rational(s.mu_hat[i]);
    if (vr) {
      a["mu"] = rational_report(vr->agents[i].mu);
      a["margin"] = rational_report(vr->agents[i].margin);
    }
    r["agents"].push_back(std::move(a));
  }
  r["feasible"] = is_feasible_allocation(inst, s.allocation);
  if (vr) {
    r["min_margin"] = rational_report(vr->min_margin);
    r["ok"] = vr->ok;
    if (!vr->ok) o.code = kGuaranteeFailure;
  }
  if (timing) r["wall_time_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
  return o;
}

void emit(const Outcome& o, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << o.doc.dump(2) << "\n";
  } else {
    write_json_file(out_path, o.doc);
  }
}

Rational parse_rational_arg(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw PreconditionError(flag + " expects a rational p/q, got '" + text + "'");
  }
}

CategoryDim parse_category_spec(const std::string& text) {
  CategoryDim c;
  char colon1 = 0, colon2 = 0;
  std::istringstream is(text);
  if (!(is >> c.size >> colon1 >> c.q_minus >> colon2 >> c.q_plus) || colon1 != ':' || colon2 != ':' ||
      is.rdbuf()->in_avail() != 0) {
    throw PreconditionError("--category expects size:qmin:qmax, got '" + text + "'");
  }
  return c;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate maximin-share allocation under category quotas"};
  app.require_subcommand(1);

  std::string instance_path, alloc_path, out_path, lift_path, dir_path, mapping_path;
  std::string algorithm = "auto", alpha_text, eps_text = "1/10";
  bool oracle = false, check = false, timing = false, all = false, shuffle = false;
  int agent = -1, n = 0, agents = 0;
  double guard = kBruteForceGuard;
  std::uint64_t seed = 0;
  std::vector<int> sizes;
  std::string policy = "tight", kind_text = "goods";
  std::optional<int> vmin, vmax;
  std::vector<std::string> category_specs;

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("instance", instance_path)->required();

  auto* ordered = app.add_subcommand("ordered", "Write the ordered instance, or lift an ordered allocation");
  ordered->add_option("instance", instance_path)->required();
  ordered->add_option("--lift", lift_path, "Allocation of the ordered instance to lift");
  ordered->add_option("--out", out_path);

  auto* solve = app.add_subcommand("solve", "Run an allocation algorithm");
  solve->add_option("instance", instance_path);
  solve->add_option("--algorithm", algorithm)
      ->check(CLI::IsMember({"auto", "single-goods", "single-chores", "multi-goods", "multi-chores", "identical-dp",
                             "fptas", "almost-identical", "bivalued"}));
  solve->add_option("--alpha", alpha_text);
  solve->add_option("--eps", eps_text);
  solve->add_flag("--oracle", oracle, "Compute exact MMS values and margins");
  solve->add_flag("--check-invariants", check);
  solve->add_flag("--timing", timing);
  solve->add_option("--guard", guard);
  solve->add_option("--out", out_path, "Report file; a directory with --dir");
  solve->add_option("--dir", dir_path, "Solve every .json file of a directory");

  auto* mms_cmd = app.add_subcommand("mms", "Exact maximin shares by enumeration");
  mms_cmd->add_option("instance", instance_path)->required();
  auto* agent_opt = mms_cmd->add_option("--agent", agent);
  mms_cmd->add_flag("--all", all)->excludes(agent_opt);
  mms_cmd->add_option("--guard", guard);
  mms_cmd->add_option("--out", out_path);

  auto* best = app.add_subcommand("best-alpha", "Best achievable MMS ratio by enumeration");
  best->add_option("instance", instance_path)->required();
  best->add_option("--guard", guard);
  best->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "Check an allocation against alpha times the exact MMS");
  verify->add_option("instance", instance_path)->required();
  verify->add_option("allocation", alloc_path)->required();
  verify->add_option("--alpha", alpha_text)->required();
  verify->add_option("--guard", guard);
  verify->add_option("--out", out_path);

  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);
  auto* gen_goods = gen->add_subcommand("tight-goods");
  auto* gen_chores = gen->add_subcommand("tight-chores");
  for (auto* g : {gen_goods, gen_chores}) {
    g->add_option("--n", n)->required();
    g->add_flag("--shuffle", shuffle);
    g->add_option("--seed", seed);
    g->add_option("--out", out_path);
  }
  auto* gen_random = gen->add_subcommand("random");
  gen_random->add_option("--seed", seed)->required();
  gen_random->add_option("--agents", n)->required();
  gen_random->add_option("--sizes", sizes, "Category sizes")->required()->delimiter(',');
  gen_random->add_option("--policy", policy)
      ->check(CLI::IsMember({"tight", "loose", "lower-only", "upper-only", "unconstrained"}));
  gen_random->add_option("--kind", kind_text)->check(CLI::IsMember({"goods", "chores", "mixed"}));
  gen_random->add_option("--min", vmin);
  gen_random->add_option("--max", vmax);
  gen_random->add_option("--out", out_path);

  auto* mblp = app.add_subcommand("mblp", "Emit the worst-case ratio MBLP for a dimension");
  mblp->add_option("--agents", agents)->required();
  mblp->add_option("--category", category_specs, "size:qmin:qmax, repeatable")->required();
  mblp->add_option("--out", out_path);
  mblp->add_option("--mapping", mapping_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (*validate) {
      Outcome o;
      const Instance inst = instance_from_json(read_json_file(instance_path));
      const ValidationReport rep = validate_instance(inst);
      o.doc["valid"] = rep.ok();
      o.doc["violations"] = rep.violations;
      o.code = rep.ok() ? kOk : kValidationError;
      emit(o, "", out);
      return o.code;
    }

    if (*ordered) {
      const Instance inst = load_instance(instance_path);
      const OrderedReduction red = to_ordered(inst);
      Outcome o;
      if (lift_path.empty()) {
        o.doc = instance_to_json(red.ordered_instance);
      } else {
        const Allocation a = allocation_from_json(read_json_file(lift_path));
        o.doc = allocation_to_json(lift_allocation(red, a));
      }
      emit(o, out_path, out);
      return o.code;
    }

    if (*solve) {
      std::optional<Rational> alpha;
      if (!alpha_text.empty()) alpha = parse_rational_arg(alpha_text, "--alpha");
      const Rational eps = parse_rational_arg(eps_text, "--eps");
      if (dir_path.empty()) {
        if (instance_path.empty()) throw PreconditionError("solve needs an instance file or --dir");
        const Instance inst = load_instance(instance_path);
        const Outcome o = solve_report(inst, algorithm, alpha, eps, check, oracle, guard, timing);
        emit(o, out_path, out);
        return o.code;
      }
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(dir_path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      if (!out_path.empty()) std::filesystem::create_directories(out_path);
      Outcome batch;
      batch.doc["results"] = json::object();
      for (const auto& f : files) {
        Outcome o;
        try {
          o = solve_report(load_instance(f.string()), algorithm, alpha, eps, check, oracle, guard, timing);
        } catch (const std::exception& e) {
          o.code = code_for(e);
          o.doc = {{"error", e.what()}};
        }
        o.doc["exit_code"] = o.code;
        batch.code = std::max(batch.code, o.code);
        if (!out_path.empty()) {
          write_json_file((std::filesystem::path(out_path) / f.filename()).string(), o.doc);
        }
        batch.doc["results"][f.filename().string()] = std::move(o.doc);
      }
      emit(batch, "", out);
      return batch.code;
    }

    if (*mms_cmd) {
      const Instance inst = load_instance(instance_path);
      Outcome o;
      o.doc["agents"] = json::array();
      std::vector<int> who;
      if (agent >= 0) {
        who.push_back(agent);
      } else {
        for (int i = 0; i < inst.n_agents; ++i) who.push_back(i);
      }
      for (int i : who) {
        const MmsResult r = mms_bruteforce(inst, i, guard);
        o.doc["agents"].push_back({{"agent", i}, {"mu", rational_report(r.value)}, {"partition", r.partition.bundles}});
      }
      emit(o, out_path, out);
      return o.code;
    }

    if (*best) {
      const Instance inst = load_instance(instance_path);
      const BestAlphaResult r = best_alpha(inst, guard);
      Outcome o;
      o.doc["alpha"] = optional_rational(r.alpha);
      o.doc["allocation"] = allocation_to_json(r.allocation);
      o.doc["mu"] = json::array();
      for (const auto& m : r.mu) o.doc["mu"].push_back(rational_report(m));
      emit(o, out_path, out);
      return o.code;
    }

    if (*verify) {
      const Instance inst = load_instance(instance_path);
      const Allocation alloc = allocation_from_json(read_json_file(alloc_path));
      const Rational alpha = parse_rational_arg(alpha_text, "--alpha");
      Outcome o;
      o.doc["alpha"] = rational_report(alpha);
      const bool shaped = static_cast<int>(alloc.bundles.size()) == inst.n_agents && is_partition(inst, alloc);
      if (!shaped || !is_feasible_allocation(inst, alloc)) {
        o.doc["ok"] = false;
        o.doc["error"] = shaped ? "allocation violates a quota" : "allocation is not a partition into n bundles";
        o.code = kGuaranteeFailure;
        emit(o, out_path, out);
        return o.code;
      }
      const VerifyReport rep = verify_alpha_mms(inst, alloc, alpha, mms_values_bruteforce(inst, guard));
      o.doc["ok"] = rep.ok;
      o.doc["agents"] = json::array();
      for (const auto& a : rep.agents) {
        o.doc["agents"].push_back({{"agent", a.agent},
                                   {"value", rational_report(a.value)},
                                   {"mu", rational_report(a.mu)},
                                   {"margin", rational_report(a.margin)}});
      }
      o.doc["min_margin"] = rational_report(rep.min_margin);
      o.code = rep.ok ? kOk : kGuaranteeFailure;
      emit(o, out_path, out);
      return o.code;
    }

    if (*gen) {
      Instance inst;
      if (*gen_goods) {
        inst = tight_goods_instance(n, shuffle, seed);
      } else if (*gen_chores) {
        inst = tight_chores_instance(n, shuffle, seed);
      } else {
        std::optional<std::pair<int, int>> range;
        const Kind kind = parse_kind(kind_text);
        if (vmin || vmax) {
          const int lo = vmin.value_or(kind == Kind::Goods ? 0 : -8);
          const int hi = vmax.value_or(kind == Kind::Chores ? 0 : 8);
          range = std::pair{lo, hi};
        }
        inst = random_instance(seed, n, sizes, parse_quota_policy(policy), range, kind);
      }
      emit(Outcome{instance_to_json(inst), kOk}, out_path, out);
      return kOk;
    }

    if (*mblp) {
      Dimension dim;
      dim.n_agents = agents;
      for (const auto& spec : category_specs) dim.categories.push_back(parse_category_spec(spec));
      const MblpModel model = build_mblp(dim);
      if (out_path.empty()) {
        write_lp(model, out);
      } else {
        emit_lp(model, out_path);
        json summary = {{"variables", model.variables.size()},
                        {"binaries", model.num_binaries()},
                        {"rows", model.rows.size()},
                        {"bundles", model.bundles.size()},
                        {"allocations", model.allocations.size()}};
        out << summary.dump(2) << "\n";
      }
      if (!mapping_path.empty()) {
        std::ofstream f(mapping_path);
        if (!f || !(f << mapping_json(model))) throw Error("cannot write " + mapping_path);
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return code_for(e);
  }
  return kOk;
}

}  // namespace mms::cli
