#include "narreq/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "narreq/error.hpp"

namespace narreq {

namespace {

Json rat_json(const Rat& r) { return rat_str(r); }

Json set_json(GroupSet s) {
  Json arr = Json::array();
  for (int i : group_list(s)) arr.push_back(i);
  return arr;
}

GroupSet set_from_json(const Json& v, int n, const std::string& what) {
  if (!v.is_array()) fail(Err::kMalformedConfig, what + " must be an array of group numbers");
  std::vector<int> groups;
  for (const Json& g : v) {
    if (!g.is_number_integer())
      fail(Err::kMalformedConfig, what + " must contain integer group numbers");
    groups.push_back(g.get<int>());
  }
  return make_set(groups, n);  // validates the 1..n range
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(Err::kMalformedConfig, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Rat rat_from_json(const Json& v, const std::string& what) {
  if (v.is_string()) return parse_rat(v.get<std::string>(), what);
  if (v.is_number_integer()) return rat_of(v.get<long>());
  if (v.is_number_unsigned()) return rat_of(static_cast<long>(v.get<unsigned long>()));
  if (v.is_number_float()) {
    double x = v.get<double>();
    if (x == std::floor(x) && std::fabs(x) <= 0x1.0p53) return rat_of(static_cast<long>(x));
    fail(Err::kMalformedConfig,
         what + ": JSON floats are binary approximations; write the exact value as a string, "
                "e.g. \"1/3\" or \"0.25\"");
  }
  fail(Err::kMalformedConfig, what + " must be a rational string or an integer");
}

LoadedConfig load_config_json(const Json& j) {
  if (!j.is_object()) fail(Err::kMalformedConfig, "config must be a JSON object");
  LoadedConfig cfg;
  const Json& jn = field(j, "n");
  if (!jn.is_number_integer() && !jn.is_number_unsigned())
    fail(Err::kMalformedConfig, "\"n\" must be an integer");
  cfg.soc.n = jn.get<int>();
  cfg.soc.q = rat_from_json(field(j, "q"), "q");
  const Json& jf = field(j, "f");
  if (!jf.is_array() || static_cast<int>(jf.size()) != cfg.soc.n)
    fail(Err::kMalformedConfig, "\"f\" must list one {\"h\",\"l\"} entry per group");
  for (int i = 0; i < cfg.soc.n; ++i) {
    const Json& row = jf[i];
    std::string tag = "f[" + std::to_string(i + 1) + "]";
    if (!row.is_object()) fail(Err::kMalformedConfig, tag + " must be an object");
    cfg.soc.f_high.push_back(rat_from_json(field(row, "h"), tag + ".h"));
    cfg.soc.f_low.push_back(rat_from_json(field(row, "l"), tag + ".l"));
  }
  const Json& jd = field(j, "domain");
  if (!jd.is_object()) fail(Err::kMalformedConfig, "\"domain\" must be an object");
  std::string kind = field(jd, "kind").get<std::string>();
  if (kind == "explicit") {
    cfg.soc.domain_spec.kind = DomainSpec::Kind::kExplicit;
    const Json& sets = field(jd, "sets");
    if (!sets.is_array()) fail(Err::kMalformedConfig, "\"sets\" must be an array of group arrays");
    for (size_t k = 0; k < sets.size(); ++k)
      cfg.soc.domain_spec.sets.push_back(
          set_from_json(sets[k], cfg.soc.n, "sets[" + std::to_string(k) + "]"));
  } else if (kind == "taxonomy") {
    cfg.soc.domain_spec.kind = DomainSpec::Kind::kTaxonomy;
    if (jd.contains("layers")) {
      const Json& layers = jd["layers"];
      if (!layers.is_array()) fail(Err::kMalformedConfig, "\"layers\" must be an array");
      for (const Json& layer : layers) {
        const Json& r = layer.is_object() ? field(layer, "r") : layer;
        if (!r.is_number_integer() && !r.is_number_unsigned())
          fail(Err::kMalformedConfig, "taxonomy split count must be an integer");
        cfg.soc.domain_spec.split_counts.push_back(r.get<int>());
      }
    }
  } else if (kind == "rich") {
    cfg.soc.domain_spec.kind = DomainSpec::Kind::kRich;
  } else {
    fail(Err::kMalformedConfig, "domain kind must be explicit, taxonomy, or rich");
  }
  validate_society(cfg.soc);
  cfg.domain = expand_narrative_domain(cfg.soc);
  return cfg;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::kMalformedConfig, "cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(Err::kMalformedConfig, path + ": " + e.what());
  }
  return load_config_json(j);
}

Json platform_to_json(const Platform& z) {
  Json j;
  j["a"] = std::string(1, policy_char(z.a));
  j["C"] = set_json(z.coalition);
  j["S"] = set_json(z.narr.groups);
  j["uses_policy_cause"] = z.narr.uses_policy;
  return j;
}

Platform platform_from_json(const Json& j, int n) {
  if (!j.is_object()) fail(Err::kMalformedConfig, "platform must be an object");
  Platform z;
  std::string a = field(j, "a").get<std::string>();
  if (a == "h")
    z.a = Policy::kHigh;
  else if (a == "l")
    z.a = Policy::kLow;
  else
    fail(Err::kMalformedConfig, "platform policy must be \"h\" or \"l\"");
  z.coalition = set_from_json(field(j, "C"), n, "C");
  z.narr.groups = set_from_json(field(j, "S"), n, "S");
  z.narr.uses_policy = j.value("uses_policy_cause", false);
  return z;
}

namespace {

void put_rat(Json& j, const std::string& key, const Rat& r) {
  j[key] = rat_json(r);
  j[key + "_decimal"] = rat_d(r);
}

}  // namespace

Json result_to_json(const EquilibriumResult& r) {
  Json j;
  j["method"] = r.method;
  put_rat(j, "alpha", r.alpha);
  put_rat(j, "u_star", r.u_star);
  put_rat(j, "d", r.d);
  j["h_platform"] = platform_to_json(r.h_platform);
  Json support = Json::array();
  for (const auto& [z, m] : r.support) {
    Json entry = platform_to_json(z);
    put_rat(entry, "mass", m);
    support.push_back(entry);
  }
  j["support"] = support;
  Json narrs = Json::array();
  for (size_t i = 0; i < r.sets.size(); ++i) {
    Json entry;
    entry["S"] = set_json(r.sets[i]);
    entry["coalition"] = set_json(r.coalitions[i]);
    put_rat(entry, "mass", r.sigma_bar[i]);
    put_rat(entry, "weight", r.weights[i]);
    bool eligible = false;
    for (GroupSet s : r.decomposition.s_bar) eligible = eligible || s == r.sets[i];
    entry["in_s_bar"] = eligible;
    narrs.push_back(entry);
  }
  j["narrative_masses"] = narrs;
  Json marginal = Json::array();
  for (const auto& [ac, m] : policy_coalition_marginal(r)) {
    Json entry;
    entry["a"] = std::string(1, policy_char(ac.first));
    entry["C"] = set_json(ac.second);
    put_rat(entry, "mass", m);
    marginal.push_back(entry);
  }
  j["marginal"] = marginal;
  Json layers = Json::array();
  for (const auto& layer : r.decomposition.layers) {
    Json one = Json::array();
    for (GroupSet s : layer) one.push_back(set_json(s));
    layers.push_back(one);
  }
  j["layers"] = layers;
  return j;
}

Json report_to_json(const CertReport& rep) {
  Json j;
  j["passed"] = rep.passed;
  Json viols = Json::array();
  for (const Violation& v : rep.violations) {
    Json entry;
    entry["kind"] = v.kind;
    if (v.platform) entry["platform"] = platform_to_json(*v.platform);
    if (v.narrative) {
      entry["narrative"] = set_json(v.narrative->groups);
      entry["narrative_uses_policy_cause"] = v.narrative->uses_policy;
    }
    entry["lhs"] = rat_json(v.lhs);
    entry["rhs"] = rat_json(v.rhs);
    entry["detail"] = v.detail;
    viols.push_back(entry);
  }
  j["violations"] = viols;
  Json rows = Json::array();
  for (const BindingRow& row : rep.rows) {
    Json entry;
    entry["S"] = set_json(row.s);
    entry["lhs"] = rat_json(row.lhs);
    entry["rhs"] = rat_json(row.rhs);
    entry["mass"] = rat_json(row.mass);
    entry["required_binding"] = row.required_binding;
    rows.push_back(entry);
  }
  j["rows"] = rows;
  Json sens;
  sens["eps"] = rat_json(rep.sensitivity.eps);
  sens["max_rel_dev_at_eps"] = rat_d(rep.sensitivity.max_rel_dev_at_eps);
  sens["max_rel_dev_at_eps_tenth"] = rat_d(rep.sensitivity.max_rel_dev_at_eps_tenth);
  sens["pass_at_eps"] = rep.sensitivity.pass_at_eps;
  sens["pass_at_eps_tenth"] = rep.sensitivity.pass_at_eps_tenth;
  j["sensitivity"] = sens;
  return j;
}

Json limit_to_json(const LimitEstimate& est) {
  Json j;
  j["tail_periods"] = est.tail_periods;
  Json marginal = Json::array();
  for (const auto& [ac, m] : est.marginal) {
    Json entry;
    entry["a"] = std::string(1, policy_char(ac.first));
    entry["C"] = set_json(ac.second);
    put_rat(entry, "mass", m);
    marginal.push_back(entry);
  }
  j["marginal"] = marginal;
  j["max_payoff_deviation"] = est.max_payoff_deviation;
  j["cycle_peaks"] = est.cycle_peaks;
  j["cycle_ratios"] = est.cycle_ratios;
  j["longest_low_run_tail"] = est.longest_low_run_tail;
  j["low_run_warning"] = est.low_run_warning;
  return j;
}

Json mobilization_to_json(const GroupPopulation& pop, Policy a, const Rat& p,
                          const MobilizationResult& r) {
  Json j;
  j["m"] = rat_json(pop.mass);
  j["cap"] = rat_json(a == Policy::kHigh ? pop.cap_high : pop.cap_low);
  j["policy"] = std::string(1, policy_char(a));
  j["p"] = rat_json(p);
  put_rat(j, "analytic_mass", r.analytic);
  j["empirical_mass"] = r.empirical;
  j["std_err"] = r.std_err;
  j["mobilized"] = r.mobilized;
  j["draws"] = r.draws;
  j["clamped"] = r.clamped;
  j["within_3_std_err"] = std::fabs(r.empirical - rat_d(r.analytic)) <= 3 * r.std_err;
  return j;
}

Json final_masses_json(const PlatformTable& table, const PlatformDistribution& initial,
                       const std::vector<std::uint64_t>& counts, std::uint64_t horizon) {
  Json arr = Json::array();
  Rat t = rat_of(1 + static_cast<long>(horizon));
  for (size_t p = 0; p < table.platforms.size(); ++p) {
    Rat mass = (initial.mass[p] + rat_of(static_cast<long>(counts[p]))) / t;
    mass.canonicalize();
    Json entry = platform_to_json(table.platforms[p]);
    entry["id"] = p;
    put_rat(entry, "mass", mass);
    entry["dominant_count"] = counts[p];
    arr.push_back(entry);
  }
  Json j;
  j["periods"] = horizon;
  j["platforms"] = arr;
  return j;
}

PlatformDistribution candidate_from_json(const PlatformTable& table, const Json& j) {
  const Json* arr = nullptr;
  if (j.is_array())
    arr = &j;
  else if (j.is_object() && j.contains("support"))
    arr = &j["support"];
  else if (j.is_object() && j.contains("platforms"))
    arr = &j["platforms"];
  else
    fail(Err::kMalformedConfig,
         "candidate must be a platform array or a document with \"support\"");
  PlatformDistribution sigma;
  sigma.mass.assign(table.platforms.size(), Rat(0));
  for (const Json& entry : *arr) {
    Platform z = platform_from_json(entry, table.soc.n);
    int idx = table.platform_index(z);
    if (idx < 0)
      fail(Err::kMalformedConfig, "candidate platform " + platform_str(z) + " is not enumerable");
    sigma.mass[idx] += rat_from_json(field(entry, "mass"), "mass of " + platform_str(z));
    sigma.mass[idx].canonicalize();
  }
  sigma.validate_normalized();
  return sigma;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "t,dominant_platform_id,max_payoff";
  for (int id : trace.track_ids) os << ",payoff_" << id;
  os << ",h_frequency_so_far\n";
  os.precision(17);
  std::uint64_t h_count = 0;
  std::uint64_t next_row = 0;
  for (std::uint64_t t = 1; t <= trace.dominant.size(); ++t) {
    int dom = trace.dominant[t - 1];
    if (trace.table->platforms[dom].a == Policy::kHigh) ++h_count;
    if (next_row < trace.rows.size() && trace.rows[next_row] == t) {
      os << t << ',' << dom << ',' << trace.max_payoff[t - 1];
      for (double v : trace.tracked[next_row]) os << ',' << v;
      os << ',' << (static_cast<double>(h_count) / static_cast<double>(t)) << '\n';
      ++next_row;
    }
  }
}

Json trace_sidecar_json(const Trace& trace) {
  Json j;
  j["u_star"] = rat_json(trace.u_star);
  j["u_star_decimal"] = trace.u_star_d;
  j["horizon"] = trace.horizon;
  Json plats = Json::array();
  for (size_t p = 0; p < trace.table->platforms.size(); ++p) {
    Json entry = platform_to_json(trace.table->platforms[p]);
    entry["id"] = p;
    entry["description"] = platform_str(trace.table->platforms[p]);
    plats.push_back(entry);
  }
  j["platforms"] = plats;
  j["tracked"] = trace.track_ids;
  return j;
}

}  // namespace narreq
