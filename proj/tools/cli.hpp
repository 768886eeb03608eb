#pragma once

// Command-line front end. run() never exits the process; it returns
//   0  success / certified
//   1  verification failure, or inconclusive when certification was required
//   2  usage error (unknown command, malformed bounds, unwritable output, ...)

#include "razak_forge/razak_forge.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace razak_forge::cli {

/// Signals exit code 2 with a diagnostic.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "k=6,l=6,m=60,s=5"; each entry is var=hi or var=lo..hi.
inline SearchBounds parse_bounds(const std::string& text) {
  SearchBounds b;
  bool have_k = false, have_l = false, have_m = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("malformed bounds entry '" + item + "' (expected var=max or var=lo..hi)");
    const std::string var = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    const auto dots = val.find("..");
    const bool grid_var = var == "k" || var == "l" || var == "m";
    const Int default_lo = grid_var ? Int(1) : Int(0);
    Range r;
    try {
      r = dots == std::string::npos ? Range{default_lo, parse_int(val)}
                                    : Range{parse_int(val.substr(0, dots)), parse_int(val.substr(dots + 2))};
    } catch (const std::invalid_argument& e) {
      throw UsageError("malformed bounds entry '" + item + "': " + e.what());
    }
    if (var == "k") {
      b.k = r;
      have_k = true;
    } else if (var == "l") {
      b.l = r;
      have_l = true;
    } else if (var == "m") {
      b.m = r;
      have_m = true;
    } else if (var == "s") {
      b.s = r;
    } else if (var == "p") {
      b.p = r;
    } else if (var == "r") {
      b.r = r;
    } else if (var == "q") {
      b.q = r;
    } else if (var == "a0") {
      b.a0 = r;
    } else if (var == "a1") {
      b.a1 = r;
    } else if (var == "b0") {
      b.b0 = r;
    } else if (var == "b1") {
      b.b1 = r;
    } else {
      throw UsageError("unknown bounds variable '" + var + "'");
    }
  }
  if (!have_k || !have_l || !have_m) throw UsageError("bounds must give k, l and m");
  return b;
}

inline Json range_json(const Range& r) { return Json{{"lo", int_json(r.lo)}, {"hi", int_json(r.hi)}}; }

inline Json bounds_json(const SearchBounds& b) {
  Json j{{"k", range_json(b.k)}, {"l", range_json(b.l)}, {"m", range_json(b.m)}, {"s", range_json(b.s)}};
  const std::pair<const char*, const std::optional<Range>*> extra[] = {
      {"p", &b.p}, {"r", &b.r}, {"q", &b.q}, {"a0", &b.a0}, {"a1", &b.a1}, {"b0", &b.b0}, {"b1", &b.b1}};
  for (const auto& [name, r] : extra) {
    if (*r) j[name] = range_json(**r);
  }
  return j;
}

inline std::vector<GrowthPolicy> parse_policies(const std::string& text) {
  std::vector<GrowthPolicy> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (!item.empty()) out.push_back(parse_policy(item));
  }
  if (out.empty()) throw UsageError("empty policy space");
  return out;
}

/// Emits the configuration file's entries as extra command-line tokens for
/// every key the command line does not already set. A "command" entry
/// ("tower report") is used when the command line names no command.
inline std::vector<std::string> merge_config(const std::vector<std::string>& args, const Json& config,
                                             const std::vector<std::string>& commands) {
  std::vector<std::string> out;
  const bool has_command = !args.empty() && std::find(commands.begin(), commands.end(), args.front()) != commands.end();
  if (!has_command && config.contains("command")) {
    std::stringstream ss(config.at("command").get<std::string>());
    std::string tok;
    while (ss >> tok) out.push_back(tok);
  }
  out.insert(out.end(), args.begin(), args.end());
  for (const auto& [key, value] : config.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    }
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      out.push_back(flag);
      out.push_back(std::to_string(value.get<std::int64_t>()));
    } else {
      throw UsageError("config key '" + key + "' must be a string, integer or boolean");
    }
  }
  return out;
}

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
};

struct TowerOptions {
  std::int64_t k1 = 1;
  std::size_t stages = 10;
  std::string policy = "u=k";
  std::string d_policy = "include_flipped";
  std::string count_policy = "min";
  std::size_t telescope = 1;
  std::string index = "same";
  std::string rho_ceiling = "1/2";
  bool require_certified = false;
  std::string policies = "u=1;u=k;u=2k;u=1,s=2;u=k,s=2;u=2k,s=2";
};

inline DPolicy parse_d_policy(const std::string& s) {
  if (s == "include_flipped") return DPolicy::include_flipped;
  if (s == "coordinate_only") return DPolicy::coordinate_only;
  throw UsageError("unknown d-policy '" + s + "'");
}

inline CountPolicy parse_count_policy(const std::string& s) {
  if (s == "min") return CountPolicy::min_based;
  if (s == "max") return CountPolicy::max_based;
  throw UsageError("unknown count-policy '" + s + "'");
}

inline ReportOptions report_options(const TowerOptions& t) {
  ReportOptions o;
  if (t.index == "same") {
    o.index = IndexMode::same;
  } else if (t.index == "offset") {
    o.index = IndexMode::offset;
  } else {
    throw UsageError("unknown index mode '" + t.index + "'");
  }
  try {
    o.rho_ceiling = parse_rational(t.rho_ceiling);
  } catch (const std::exception& e) {
    throw UsageError("malformed --rho-ceiling '" + t.rho_ceiling + "': " + e.what());
  }
  if (o.rho_ceiling <= 0 || o.rho_ceiling >= 1) throw UsageError("--rho-ceiling must lie strictly between 0 and 1");
  return o;
}

inline std::vector<Stage> tower_stages(const TowerOptions& t) {
  if (t.k1 < 1) throw UsageError("--k1 must be >= 1");
  if (t.stages < 1) throw UsageError("--stages must be >= 1");
  Schedule sched{Int(t.k1), parse_policy(t.policy), parse_d_policy(t.d_policy), parse_count_policy(t.count_policy)};
  auto stages = build(sched, t.stages);
  if (t.telescope > 1) stages = telescope(stages, t.telescope, sched.d_policy);
  return stages;
}

struct Result {
  int code = 0;
  std::string body;
};

inline void add_output_options(CLI::App* cmd, OutputOptions& o, const std::string& formats) {
  cmd->add_option("--format", o.format, "Output format (" + formats + ")")->capture_default_str();
  cmd->add_option("--out", o.out_path, "Write the report here instead of stdout");
}

inline void require_format(const OutputOptions& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (o.format == a) return;
  }
  throw UsageError("format '" + o.format + "' is not available for this command");
}

// ---------------------------------------------------------------------------

inline Result cmd_verify_family(std::int64_t sweep, const OutputOptions& o) {
  require_format(o, {"json", "text"});
  if (sweep < 1) throw UsageError("--sweep must be >= 1");
  const auto cert = verify_family_symbolic();
  const auto sw = sweep_family(sweep);
  const bool ok = cert.all_zero() && sw.passed == sw.total;
  const std::string summary = std::to_string(sw.passed) + "/" + std::to_string(sw.total) + " instances pass; " +
                              std::to_string(cert.equations_certified()) + "/" +
                              std::to_string(FamilyCertificate::equation_count) + " symbolic identities zero";
  Result r{ok ? 0 : 1, {}};
  if (o.format == "json") {
    r.body = dump(Json{{"symbolic", family_certificate_json(cert)},
                       {"sweep", family_sweep_json(sw)},
                       {"ok", ok},
                       {"summary", summary}});
  } else {
    std::string text;
    for (const auto& res : cert.residuals) text += res.name + " residual: " + res.poly.to_string() + "\n";
    r.body = text + summary + "\n";
  }
  return r;
}

template <class Instance>
std::string render_instances(System system, const SearchBounds& b, const std::vector<Instance>& xs,
                             const OutputOptions& o) {
  if (o.format == "csv") return instances_csv(xs);
  if (o.format == "text") {
    return format_table(fields_of<Instance>(), instance_rows(xs)) + std::to_string(xs.size()) + " " +
           to_string(system) + " solutions\n";
  }
  Json arr = Json::array();
  for (const auto& x : xs) arr.push_back(instance_json(x));
  return dump(Json{{"system", to_string(system)}, {"bounds", bounds_json(b)}, {"count", xs.size()}, {"instances", arr}});
}

inline Result cmd_enumerate(const std::string& system_name, const std::string& bounds_text,
                            const std::optional<std::string>& work_limit, const OutputOptions& o) {
  require_format(o, {"json", "csv", "text"});
  System system;
  if (system_name == "unital") {
    system = System::unital;
  } else if (system_name == "corrected") {
    system = System::corrected;
  } else {
    throw UsageError("unknown system '" + system_name + "' (expected unital or corrected)");
  }
  SearchBounds b = parse_bounds(bounds_text);
  if (work_limit) b.work_limit = parse_int(*work_limit);
  if (system == System::unital) return {0, render_instances(system, b, enumerate_unital(b), o)};
  return {0, render_instances(system, b, enumerate_corrected(b), o)};
}

inline Result cmd_certify_obstruction(const std::string& bounds_text, const OutputOptions& o) {
  require_format(o, {"json", "text"});
  const SearchBounds b = parse_bounds(bounds_text);
  const auto cert = derive_unital_obstruction();
  const auto sols = enumerate_unital(b);
  std::size_t bad = 0;
  for (const auto& x : sols) {
    if (x.b0 != 0 || x.a0 != x.m || !verify_instance(x).ok) ++bad;
  }
  const bool ok = cert.certified() && bad == 0;
  const std::string summary =
      ok ? "all " + std::to_string(sols.size()) + " unital solutions have b0=0 and a0=m"
         : std::to_string(bad) + " of " + std::to_string(sols.size()) + " unital solutions violate b0=0, a0=m";
  Result r{ok ? 0 : 1, {}};
  if (o.format == "json") {
    r.body = dump(Json{{"symbolic", obstruction_json(cert)},
                       {"bounds", bounds_json(b)},
                       {"solutions", sols.size()},
                       {"violations", bad},
                       {"ok", ok},
                       {"summary", summary}});
  } else {
    r.body = "b0 = 0 certificate: " + std::string(cert.b0_vanishes.certified() ? "zero" : "NONZERO") + "\n" +
             "a0 = m certificate: " + std::string(cert.a0_equals_m.certified() ? "zero" : "NONZERO") + "\n" +
             summary + "\n";
  }
  return r;
}

inline Result cmd_tower_build(const TowerOptions& t, const OutputOptions& o) {
  require_format(o, {"json", "csv", "text"});
  const auto stages = tower_stages(t);
  if (o.format == "csv") return {0, stages_csv(stages)};
  if (o.format == "text") return {0, stages_text(stages)};
  return {0, dump(Json{{"k1", t.k1},
                       {"policy", parse_policy(t.policy).name()},
                       {"d_policy", t.d_policy},
                       {"stages", stages_json(stages)}})};
}

inline Result cmd_tower_report(const TowerOptions& t, const OutputOptions& o) {
  require_format(o, {"json", "text"});
  const auto stages = tower_stages(t);
  const auto rep = perforation_report(stages, report_options(t));
  const int code = (t.require_certified && rep.verdict != PerforationVerdict::certified_positive) ? 1 : 0;
  if (o.format == "text") return {code, perforation_text(stages, rep)};
  return {code, dump(Json{{"k1", t.k1},
                          {"policy", parse_policy(t.policy).name()},
                          {"d_policy", t.d_policy},
                          {"stages", stages_json(stages)},
                          {"report", perforation_json(rep)}})};
}

inline Result cmd_tower_search(const TowerOptions& t, const OutputOptions& o) {
  require_format(o, {"json", "text"});
  if (t.k1 < 1 || t.stages < 1) throw UsageError("--k1 and --stages must be >= 1");
  const auto res = search_schedule(Int(t.k1), t.stages, parse_policies(t.policies), parse_d_policy(t.d_policy),
                                   report_options(t));
  const bool certified = res.best_outcome().report.verdict == PerforationVerdict::certified_positive;
  const int code = (t.require_certified && !certified) ? 1 : 0;
  if (o.format == "text") return {code, search_text(res)};
  return {code, dump(search_json(res))};
}

struct RankOptions {
  std::int64_t k = 1;
  std::int64_t n = 1;
  std::size_t stage = 1;
  std::string a_path, b_path;
  std::optional<std::int64_t> a_const, b_const;
  std::size_t resolution = 3;
  std::optional<std::int64_t> fiber_bound;
};

inline RankFunction load_rank(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read rank function file '" + path + "'");
  try {
    return rank_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw UsageError("malformed rank function file '" + path + "': " + e.what());
  }
}

inline Result cmd_rank_demo(const TowerOptions& t, const RankOptions& ro, const OutputOptions& o) {
  require_format(o, {"json", "text"});
  if (ro.k < 1 || ro.n < 1) throw UsageError("--k and --n must be >= 1");
  if (ro.stage < 1) throw UsageError("--stage must be >= 1");
  TowerOptions tt = t;
  tt.stages = std::max(tt.stages, ro.stage);
  const auto stages = tower_stages(tt);
  if (ro.stage > stages.size()) throw UsageError("--stage exceeds the number of built stages");
  const Stage& st = stages[ro.stage - 1];
  const auto dim = to_int64(st.cube_dim);
  auto witness = [&](const std::string& path, const std::optional<std::int64_t>& c, const char* which) {
    if (!path.empty()) return load_rank(path);
    if (!c) throw UsageError(std::string("give --") + which + " FILE or --" + which + "-const VALUE");
    if (*c < 0) throw UsageError("rank values must be >= 0");
    if (!dim || *dim < 1) throw UsageError("stage cube dimension is too large for a lattice");
    const auto v = static_cast<std::uint64_t>(*c);
    const auto bound = ro.fiber_bound ? static_cast<std::uint64_t>(*ro.fiber_bound) : v;
    return RankFunction::constant(Grid(static_cast<std::size_t>(*dim), ro.resolution), v, bound);
  };
  const RankFunction a = witness(ro.a_path, ro.a_const, "a");
  const RankFunction b = witness(ro.b_path, ro.b_const, "b");
  const auto rep = perforation_rank_demo(st, static_cast<std::uint64_t>(ro.k), static_cast<std::uint64_t>(ro.n), a, b);
  if (o.format == "text") return {0, demo_text(rep)};
  return {0, dump(Json{{"stage", ro.stage}, {"cube_dim", int_json(st.cube_dim)}, {"demo", demo_json(rep)}})};
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> commands{"verify-family", "enumerate", "certify-obstruction", "tower", "rank"};

  // --config FILE is resolved before parsing so that its entries become flags.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) {
      err << "config error: cannot read '" << path << "'\n";
      return 2;
    }
    try {
      const Json config = Json::parse(in);
      if (!config.is_object()) throw UsageError("config file must hold a JSON object");
      args = merge_config(args, config, commands);
    } catch (const Json::exception& e) {
      err << "config error: " << e.what() << "\n";
      return 2;
    } catch (const UsageError& e) {
      err << "config error: " << e.what() << "\n";
      return 2;
    }
    break;
  }

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' &&
      std::find(commands.begin(), commands.end(), args.front()) == commands.end()) {
    err << "usage error: unknown command '" << args.front() << "'\n";
    return 2;
  }

  CLI::App app{"Exact verification of admissibility equations, solution families and towers of Razak blocks",
               "razak_forge"};
  app.require_subcommand(1, 1);

  OutputOptions oo;
  TowerOptions to;
  RankOptions ro;
  std::int64_t sweep = 20;
  std::string system_name, bounds_text;
  std::string obstruction_bounds = "k=6,l=6,m=60,s=0..5";
  std::optional<std::string> work_limit;

  auto* vf = app.add_subcommand("verify-family", "Symbolic certificate plus numeric sweep of the solution family");
  vf->add_option("--sweep", sweep, "Sweep s, k, u over [1, N]")->capture_default_str();
  add_output_options(vf, oo, "json|text");

  auto* en = app.add_subcommand("enumerate", "Enumerate solutions within bounds");
  en->add_option("--system", system_name, "unital or corrected")->required();
  en->add_option("--bounds", bounds_text, "e.g. k=6,l=6,m=60,s=0..5")->required();
  en->add_option("--work-limit", work_limit, "Refuse searches estimated above this many steps");
  add_output_options(en, oo, "json|csv|text");

  auto* co = app.add_subcommand("certify-obstruction", "Show unital maps force b0 = 0 and a0 = m");
  co->add_option("--bounds", obstruction_bounds, "Enumeration bounds")->capture_default_str();
  add_output_options(co, oo, "json|text");

  auto add_tower_options = [&](CLI::App* cmd) {
    cmd->add_option("--k1", to.k1, "Block parameter of the first stage")->capture_default_str();
    cmd->add_option("--stages", to.stages, "Number of stages")->capture_default_str();
    cmd->add_option("--policy", to.policy, "Growth policy, e.g. u=k or u=1,s=2")->capture_default_str();
    cmd->add_option("--d-policy", to.d_policy, "include_flipped or coordinate_only")->capture_default_str();
    cmd->add_option("--count-policy", to.count_policy, "min or max coordinate counting")->capture_default_str();
    cmd->add_option("--telescope", to.telescope, "Compose stages in groups of this size")->capture_default_str();
  };
  auto add_report_options = [&](CLI::App* cmd) {
    cmd->add_option("--index", to.index, "same (d_i/p_i) or offset (d_{i+1}/p_i)")->capture_default_str();
    cmd->add_option("--rho-ceiling", to.rho_ceiling, "Largest accepted deficit ratio")->capture_default_str();
    cmd->add_flag("--require-certified", to.require_certified, "Exit 1 unless the product is certified positive");
  };

  auto* tower = app.add_subcommand("tower", "Inductive tower stages and the product criterion");
  tower->require_subcommand(1, 1);
  auto* tb = tower->add_subcommand("build", "Build stage data");
  add_tower_options(tb);
  add_output_options(tb, oo, "json|csv|text");
  auto* tr = tower->add_subcommand("report", "Evaluate the product criterion");
  add_tower_options(tr);
  add_report_options(tr);
  add_output_options(tr, oo, "json|text");
  auto* ts = tower->add_subcommand("search", "Pick the growth policy with the best certified bound");
  add_tower_options(ts);
  add_report_options(ts);
  ts->add_option("--policies", to.policies, "Semicolon-separated policies")->capture_default_str();
  add_output_options(ts, oo, "json|text");

  auto* rank = app.add_subcommand("rank", "Rank-function model");
  rank->require_subcommand(1, 1);
  auto* rd = rank->add_subcommand("demo", "Compare witness ranks at one tower stage");
  add_tower_options(rd);
  rd->add_option("--stage", ro.stage, "Stage index (1-based)")->capture_default_str();
  rd->add_option("--k", ro.k, "Multiplier k in (k+1)[a] <= k[b]")->capture_default_str();
  rd->add_option("--n", ro.n, "Multiplier n in [a] <= n[b]")->capture_default_str();
  rd->add_option("--a", ro.a_path, "Rank function JSON for a");
  rd->add_option("--b", ro.b_path, "Rank function JSON for b");
  rd->add_option("--a-const", ro.a_const, "Constant rank for a");
  rd->add_option("--b-const", ro.b_const, "Constant rank for b");
  rd->add_option("--resolution", ro.resolution, "Lattice points per axis for constant witnesses")->capture_default_str();
  rd->add_option("--fiber-bound", ro.fiber_bound, "Fiber bound for constant witnesses");
  add_output_options(rd, oo, "json|text");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (oo.format != "json" && oo.format != "csv" && oo.format != "text") {
      throw UsageError("unknown format '" + oo.format + "'");
    }
    std::unique_ptr<std::ofstream> file;
    if (!oo.out_path.empty()) {
      file = std::make_unique<std::ofstream>(oo.out_path, std::ios::binary | std::ios::trunc);
      if (!*file) {
        err << "output error: cannot write '" << oo.out_path << "'\n";
        return 2;
      }
    }

    Result res;
    if (vf->parsed()) {
      res = cmd_verify_family(sweep, oo);
    } else if (en->parsed()) {
      res = cmd_enumerate(system_name, bounds_text, work_limit, oo);
    } else if (co->parsed()) {
      res = cmd_certify_obstruction(obstruction_bounds, oo);
    } else if (tb->parsed()) {
      res = cmd_tower_build(to, oo);
    } else if (tr->parsed()) {
      res = cmd_tower_report(to, oo);
    } else if (ts->parsed()) {
      res = cmd_tower_search(to, oo);
    } else if (rd->parsed()) {
      res = cmd_rank_demo(to, ro, oo);
    } else {
      err << "usage error: no command given\n";
      return 2;
    }

    if (file) {
      *file << res.body;
      file->flush();
      if (!*file) {
        err << "output error: failed writing '" << oo.out_path << "'\n";
        return 2;
      }
    } else {
      out << res.body;
    }
    return res.code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const WorkLimitExceeded& e) {
    err << "bounds error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "verification error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace razak_forge::cli
