#include "narreq/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "narreq/error.hpp"
#include "narreq/io.hpp"

namespace narreq {

namespace {

std::string resolve_out_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  const char* dir = std::getenv("NARREQ_OUT_DIR");
  if (!dir || !*dir) return path;
  return (std::filesystem::path(dir) / p).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::string full = resolve_out_path(path);
  std::ofstream f(full);
  if (!f) fail(Err::kMalformedConfig, "cannot write " + full);
  f << text;
}

void emit_json(const Json& j, const std::string& out_file, std::ostream& out) {
  std::string text = j.dump(2) + "\n";
  if (out_file.empty())
    out << text;
  else
    write_text(out_file, text);
}

SolveMethod method_from_name(const std::string& name) {
  if (name == "auto") return SolveMethod::kAuto;
  if (name == "general") return SolveMethod::kGeneral;
  if (name == "two-group") return SolveMethod::kTwoGroup;
  if (name == "taxonomy") return SolveMethod::kTaxonomy;
  if (name == "rich") return SolveMethod::kRich;
  fail(Err::kMalformedConfig, "unknown closed form " + name);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// Track specs: "<a>:<C>:<S>" with comma-separated groups; in the S slot the
// token 0 stands for the policy cause and "-" for the empty narrative.
// Examples: "h:1:0" (true platform, n=2), "l:2:3,4", "l:2,3,4:-".
Platform parse_track_spec(const std::string& spec, int n) {
  std::vector<std::string> parts = split(spec, ':');
  if (parts.size() != 3) fail(Err::kMalformedConfig, "track spec must look like a:C:S; got " + spec);
  Platform z;
  if (parts[0] == "h")
    z.a = Policy::kHigh;
  else if (parts[0] == "l")
    z.a = Policy::kLow;
  else
    fail(Err::kMalformedConfig, "track policy must be h or l in " + spec);
  auto parse_groups = [&](const std::string& text, bool allow_policy) {
    GroupSet s = 0;
    if (text == "-" || text.empty()) return s;
    for (const std::string& tok : split(text, ',')) {
      try {
        int g = std::stoi(tok);
        if (g == 0 && allow_policy) {
          z.narr.uses_policy = true;
          continue;
        }
        if (g < 1 || g > n) throw std::out_of_range("group");
        s = with_group(s, g);
      } catch (const std::exception&) {
        fail(Err::kMalformedConfig, "bad group token \"" + tok + "\" in " + spec);
      }
    }
    return s;
  };
  z.coalition = parse_groups(parts[1], false);
  z.narr.groups = parse_groups(parts[2], true);
  return z;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::kMalformedConfig, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(Err::kMalformedConfig, path + ": " + e.what());
  }
}

struct SolveArgs {
  std::string config;
  std::string method = "auto";
  std::string out_file;
  bool check =
#ifndef NDEBUG
      true;
#else
      false;
#endif
  bool oracle = false;
  std::uint64_t guard = kDefaultPlatformGuard;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  LoadedConfig lc = load_config_file(a.config);
  EquilibriumResult r = solve(lc.soc, lc.domain, method_from_name(a.method));
  if (a.check) {
    if (r.method != "general") {
      EquilibriumResult g = solve_general(lc.soc, lc.domain);
      if (!same_equilibrium(r, g))
        fail(Err::kMultipleSolutions,
             "closed form \"" + r.method + "\" disagrees with the general algorithm");
    }
    PlatformTable table = enumerate_platforms(lc.soc, lc.domain, a.guard);
    CertReport rep = verify_equilibrium(table, distribution_from_result(table, r));
    if (!rep.passed) {
      emit_json(report_to_json(rep), "", err);
      return 3;
    }
  }
  if (a.oracle) {
    EquilibriumResult o = oracle_solve(lc.soc, lc.domain);
    if (!same_equilibrium(r, o))
      fail(Err::kMultipleSolutions, "support-enumeration oracle disagrees with the solver");
  }
  emit_json(result_to_json(r), a.out_file, out);
  return 0;
}

struct VerifyArgs {
  std::string config;
  std::string candidate;
  std::string eps = "1/1000000000";
  std::string out_file;
  std::uint64_t guard = kDefaultPlatformGuard;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  LoadedConfig lc = load_config_file(a.config);
  PlatformTable table = enumerate_platforms(lc.soc, lc.domain, a.guard);
  PlatformDistribution cand = candidate_from_json(table, read_json_file(a.candidate));
  VerifyOptions opts;
  opts.eps = parse_rat(a.eps, "eps");
  if (!(opts.eps > 0) || opts.eps >= 1) fail(Err::kMalformedConfig, "eps must lie in (0,1)");
  CertReport rep = verify_equilibrium(table, cand, opts);
  emit_json(report_to_json(rep), a.out_file, out);
  return rep.passed ? 0 : 3;
}

struct SimArgs {
  std::string config;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::string tie = "canonical";
  std::string mode = "auto";
  std::vector<std::string> track;
  std::string trace_file;
  std::string platforms_file;
  std::string summary_file;
  std::string tail = "1/10";
  std::uint64_t guard = kDefaultPlatformGuard;
};

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  LoadedConfig lc = load_config_file(a.config);
  PlatformTable table = enumerate_platforms(lc.soc, lc.domain, a.guard);
  std::optional<EquilibriumResult> eq;
  std::optional<Rat> alpha_hint;
  try {
    eq = solve(lc.soc, lc.domain);
    alpha_hint = eq->alpha;
  } catch (const Error&) {
    // no closed form and no hint; the simulation itself is unaffected
  }
  DynOptions opt;
  opt.horizon = a.steps;
  opt.seed = a.seed;
  if (a.tie == "canonical")
    opt.tie = TieBreak::kCanonical;
  else if (a.tie == "random")
    opt.tie = TieBreak::kRandom;
  else
    fail(Err::kMalformedConfig, "tie must be canonical or random");
  if (a.mode == "auto")
    opt.mode = SimMode::kAuto;
  else if (a.mode == "exact")
    opt.mode = SimMode::kExact;
  else if (a.mode == "fast")
    opt.mode = SimMode::kFast;
  else
    fail(Err::kMalformedConfig, "mode must be auto, exact, or fast");
  for (const std::string& spec : a.track) {
    if (spec == "all-eq") {
      if (!eq) fail(Err::kMalformedConfig, "all-eq tracking needs a solvable configuration");
      for (const auto& [z, m] : eq->support) opt.track.push_back(table.platform_index(z));
      continue;
    }
    Platform z = parse_track_spec(spec, lc.soc.n);
    int idx = table.platform_index(z);
    if (idx < 0)
      fail(Err::kMalformedConfig, "tracked platform " + platform_str(z) + " is not enumerable");
    opt.track.push_back(idx);
  }
  DynResult res = run_dynamics(table, opt);
  LimitEstimate est = limit_estimate(res.trace, parse_rat(a.tail, "tail"), alpha_hint);
  if (!a.trace_file.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, res.trace);
    write_text(a.trace_file, csv.str());
    Json sidecar = trace_sidecar_json(res.trace);
    write_text(a.trace_file + ".meta.json", sidecar.dump(2) + "\n");
  }
  if (!a.platforms_file.empty())
    emit_json(final_masses_json(table, res.initial, res.dominant_counts, a.steps),
              a.platforms_file, out);
  Json summary;
  summary["steps"] = a.steps;
  summary["seed"] = a.seed;
  summary["tie"] = a.tie;
  summary["mode"] = res.mode_used == SimMode::kExact ? "exact" : "fast";
  summary["u_star"] = rat_str(res.trace.u_star);
  summary["u_star_decimal"] = res.trace.u_star_d;
  if (alpha_hint) summary["solver_alpha"] = rat_str(*alpha_hint);
  summary["limit"] = limit_to_json(est);
  emit_json(summary, a.summary_file, out);
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string vary;
  std::string out_file;
  unsigned jobs = 0;
};

void apply_config_path(Json& cfg, const std::vector<std::string>& path, const Rat& value) {
  if (path.size() == 1 && path[0] == "q") {
    cfg["q"] = rat_str(value);
    return;
  }
  if (path.size() == 3 && path[0] == "f" && (path[2] == "h" || path[2] == "l")) {
    int group = 0;
    try {
      group = std::stoi(path[1]);
    } catch (const std::exception&) {
      fail(Err::kMalformedConfig, "bad group in vary path");
    }
    if (!cfg.contains("f") || !cfg["f"].is_array() || group < 1 ||
        group > static_cast<int>(cfg["f"].size()))
      fail(Err::kMalformedConfig, "vary path points outside \"f\"");
    cfg["f"][group - 1][path[2]] = rat_str(value);
    return;
  }
  fail(Err::kMalformedConfig, "vary path must be q or f.<group>.<h|l>");
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  auto eq_pos = a.vary.find('=');
  if (eq_pos == std::string::npos)
    fail(Err::kMalformedConfig, "--vary expects path=from:to:steps");
  std::vector<std::string> path = split(a.vary.substr(0, eq_pos), '.');
  std::vector<std::string> range = split(a.vary.substr(eq_pos + 1), ':');
  if (range.size() != 3) fail(Err::kMalformedConfig, "--vary expects path=from:to:steps");
  Rat from = parse_rat(range[0], "vary from");
  Rat to = parse_rat(range[1], "vary to");
  long steps = 0;
  try {
    steps = std::stol(range[2]);
  } catch (const std::exception&) {
    steps = 0;
  }
  if (steps < 1) fail(Err::kMalformedConfig, "vary steps must be a positive integer");
  Json base = read_json_file(a.config);
  std::vector<Rat> values;
  for (long k = 0; k < steps; ++k) {
    Rat v = steps == 1 ? from : from + (to - from) * rat_of(k) / rat_of(steps - 1);
    v.canonicalize();
    values.push_back(v);
  }

  struct Row {
    Rat value;
    bool ok = false;
    std::string method;
    Rat alpha, u_star, d;
    std::size_t support_size = 0;
    std::string error;
  };
  std::vector<Row> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      rows[i].value = values[i];
      try {
        Json cfg = base;
        apply_config_path(cfg, path, values[i]);
        LoadedConfig lc = load_config_json(cfg);
        EquilibriumResult r = solve(lc.soc, lc.domain);
        rows[i].ok = true;
        rows[i].method = r.method;
        rows[i].alpha = r.alpha;
        rows[i].u_star = r.u_star;
        rows[i].d = r.d;
        rows[i].support_size = r.support.size();
      } catch (const Error& e) {
        rows[i].error = e.what();  // already prefixed with the error kind
      }
    }
  };
  unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, values.size());
  std::vector<std::thread> pool;
  for (unsigned k = 0; k + 1 < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  std::ostringstream csv;
  csv.precision(17);
  csv << "path,value,value_decimal,method,alpha,alpha_decimal,u_star,d,support_size,error\n";
  std::string path_text = a.vary.substr(0, eq_pos);
  for (const Row& row : rows) {
    csv << path_text << ',' << rat_str(row.value) << ',' << rat_d(row.value) << ',';
    if (row.ok) {
      csv << row.method << ',' << rat_str(row.alpha) << ',' << rat_d(row.alpha) << ','
          << rat_str(row.u_star) << ',' << rat_str(row.d) << ',' << row.support_size << ',';
    } else {
      csv << ",,,,,,";
    }
    csv << '"' << row.error << "\"\n";
  }
  if (a.out_file.empty())
    out << csv.str();
  else
    write_text(a.out_file, csv.str());
  return 0;
}

struct MobilizeArgs {
  std::string m;
  std::string cap;
  std::string p;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string out_file;
};

int cmd_mobilize(const MobilizeArgs& a, std::ostream& out) {
  GroupPopulation pop;
  pop.mass = parse_rat(a.m, "m");
  pop.cap_high = parse_rat(a.cap, "cap");
  pop.cap_low = pop.cap_high;
  Rat p = parse_rat(a.p, "p");
  MobilizationResult r = simulate_mobilization(pop, Policy::kHigh, p, a.samples, a.seed);
  emit_json(mobilization_to_json(pop, Policy::kHigh, p, r), a.out_file, out);
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"narrative-competition equilibrium toolkit"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve_cmd = app.add_subcommand("solve", "compute the essential equilibrium");
  solve_cmd->add_option("config", sa.config, "society config JSON")->required();
  solve_cmd->add_option("--closed-form", sa.method, "auto|general|two-group|taxonomy|rich")
      ->check(CLI::IsMember({"auto", "general", "two-group", "taxonomy", "rich"}));
  solve_cmd->add_flag("--check,!--no-check", sa.check,
                      "cross-check against the general algorithm and certify");
  solve_cmd->add_flag("--oracle", sa.oracle, "also cross-check the support-enumeration oracle");
  solve_cmd->add_option("--max-platforms", sa.guard, "platform enumeration guard");
  solve_cmd->add_option("--out", sa.out_file, "write the result JSON here");

  VerifyArgs va;
  CLI::App* verify_cmd_p = app.add_subcommand("verify", "certify a candidate distribution");
  verify_cmd_p->add_option("config", va.config, "society config JSON")->required();
  verify_cmd_p->add_option("candidate", va.candidate, "candidate JSON (solve output works)")
      ->required();
  verify_cmd_p->add_option("--eps", va.eps, "sensitivity mixture weight (rational)");
  verify_cmd_p->add_option("--max-platforms", va.guard, "platform enumeration guard");
  verify_cmd_p->add_option("--out", va.out_file, "write the report JSON here");

  SimArgs ma;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the dominant-platform dynamics");
  sim_cmd->add_option("config", ma.config, "society config JSON")->required();
  sim_cmd->add_option("--steps", ma.steps, "number of periods")->required();
  sim_cmd->add_option("--seed", ma.seed, "seed for random tie-breaking");
  sim_cmd->add_option("--tie", ma.tie, "canonical|random")
      ->check(CLI::IsMember({"canonical", "random"}));
  sim_cmd->add_option("--mode", ma.mode, "auto|exact|fast")
      ->check(CLI::IsMember({"auto", "exact", "fast"}));
  sim_cmd->add_option("--track", ma.track,
                      "platform specs a:C:S (0 = policy cause, - = none) or all-eq");
  sim_cmd->add_option("--trace", ma.trace_file, "trace CSV path (sidecar: <path>.meta.json)");
  sim_cmd->add_option("--platforms", ma.platforms_file, "final platform masses JSON path");
  sim_cmd->add_option("--summary", ma.summary_file, "summary JSON path (default: stdout)");
  sim_cmd->add_option("--tail", ma.tail, "tail fraction for the limit estimate");
  sim_cmd->add_option("--max-platforms", ma.guard, "platform enumeration guard");

  SweepArgs wa;
  CLI::App* sweep_cmd_p = app.add_subcommand("sweep", "solve across a parameter range");
  sweep_cmd_p->add_option("config", wa.config, "society config JSON")->required();
  sweep_cmd_p->add_option("--vary", wa.vary, "path=from:to:steps, e.g. f.2.l=2:4:9")->required();
  sweep_cmd_p->add_option("--out", wa.out_file, "write the CSV here (default: stdout)");
  sweep_cmd_p->add_option("--jobs", wa.jobs, "worker count (default: hardware)");

  MobilizeArgs ba;
  CLI::App* mob_cmd = app.add_subcommand("mobilize", "microfoundation sampler");
  mob_cmd->add_option("--m", ba.m, "population mass (rational)")->required();
  mob_cmd->add_option("--cap", ba.cap, "cost cap (rational)")->required();
  mob_cmd->add_option("--p", ba.p, "outcome belief (rational)")->required();
  mob_cmd->add_option("--samples", ba.samples, "number of cost draws")->required();
  mob_cmd->add_option("--seed", ba.seed, "rng seed");
  mob_cmd->add_option("--out", ba.out_file, "write the report JSON here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(solve_cmd)) return cmd_solve(sa, out, err);
    if (app.got_subcommand(verify_cmd_p)) return cmd_verify(va, out);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(ma, out);
    if (app.got_subcommand(sweep_cmd_p)) return cmd_sweep(wa, out);
    if (app.got_subcommand(mob_cmd)) return cmd_mobilize(ba, out);
  } catch (const Error& e) {
    Json j;
    j["error"] = Json{{"kind", err_name(e.kind())}, {"message", e.what()}};
    err << j.dump(2) << "\n";
    return exit_code_for(e.kind());
  }
  return 1;
}

}  // namespace narreq
