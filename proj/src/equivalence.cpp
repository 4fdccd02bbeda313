#include "tvlab/equivalence.hpp"

#include <chrono>
#include <cmath>

#include "tvlab/consistency.hpp"
#include "tvlab/lp.hpp"
#include "tvlab/parallel.hpp"
#include "tvlab/random.hpp"

namespace tvlab {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSetCountStream = 0x5e75;

std::size_t pick_count(std::uint64_t seed, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(mix_seed(seed, kSetCountStream) % (hi - lo + 1));
}

json dependence_to_json(const AffineDependence& dep) {
  json coeffs = json::array();
  for (const Complex& c : dep.coefficients) coeffs.push_back(complex_to_json(c));
  return json{{"support", dep.support}, {"coefficients", coeffs}};
}

AffineDependence dependence_from_json(const json& j) {
  AffineDependence dep;
  dep.support = j.at("support").get<std::vector<std::size_t>>();
  for (const auto& c : j.at("coefficients")) dep.coefficients.push_back(complex_from_json(c));
  return dep;
}

json verdict_to_json(const ConsistencyVerdict& v, std::size_t budget) {
  json out{{"pass", v.pass},
           {"dependences_checked", v.dependences_checked},
           {"sampled_directions", v.samples},
           {"budget", budget}};
  if (!v.pass) {
    out["exact_confirmed"] = v.exact_confirmed;
    if (v.violation) out["violation"] = dependence_to_json(*v.violation);
  }
  return out;
}

json report_to_json(const TransversalReport& r, double tol) {
  return json{{"distances", r.distances}, {"max_distance", r.max_distance}, {"tol", tol}, {"pass", r.pass}};
}

struct Recorder {
  json failures = json::array();
  void fail(std::size_t trial, const char* branch, const std::string& what) {
    failures.push_back(json{{"trial", trial}, {"branch", branch}, {"what", what}});
  }
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

json run_planted(const EquivalenceConfig& config, std::size_t trial, Recorder& rec) {
  const auto start = std::chrono::steady_clock::now();
  const Instance inst = planted_trial_instance(config, trial);
  json out{{"seed", inst.seed}, {"sets", inst.family.size()}, {"planted", to_json(*inst.planted)}};

  const ConsistencyWitness witness = witness_from_transversal(inst.family, *inst.planted);
  ConsistencyConfig cc;
  cc.samples = config.samples;
  cc.seed = inst.seed;
  const ConsistencyVerdict verdict = check_dependency_consistency(inst.family, witness, cc);
  out["consistency"] = verdict_to_json(verdict, config.samples);
  if (!verdict.pass) rec.fail(trial, "planted", "consistency check failed on a planted instance");

  SearchConfig sc = config.search;
  sc.seed = mix_seed(config.search.seed, inst.seed);
  const ComplexSearchResult direct = find_complex_transversal(inst.family, sc);
  json dj{{"found", direct.hyperplane.has_value()},
          {"best_margin", direct.best_margin},
          {"evaluations", direct.evaluations}};
  if (direct.hyperplane) {
    dj["hyperplane"] = to_json(*direct.hyperplane);
    const auto rep = verify_transversal(*direct.hyperplane, inst.family, 1e-6);
    dj["verify"] = report_to_json(rep, 1e-6);
    if (!rep.pass) rec.fail(trial, "planted", "direction search hyperplane failed verification");
  } else {
    rec.fail(trial, "planted", "direction search found no transversal");
  }
  out["direction"] = dj;

  if (config.borsuk) {
    const BorsukSearchResult zero = find_borsuk_zero(embed_family(inst.family), witness, sc);
    json bj{{"found", zero.found()},
            {"residual", zero.residual},
            {"starts_used", zero.starts_used},
            {"pole_rejections", zero.pole_rejections}};
    if (zero.hyperplane) {
      bj["hyperplane"] = to_json(*zero.hyperplane);
      bj["verify"] = report_to_json(verify_transversal(*zero.hyperplane, inst.family, sc.verify_tol), sc.verify_tol);
      bj["cross_validated"] = direct.hyperplane.has_value();
      if (!direct.hyperplane) rec.fail(trial, "planted", "zero search succeeded where direction search failed");
    } else {
      rec.fail(trial, "planted", "zero search found no verified zero");
    }
    if (zero.angle_certificate) bj["angle_certificate"] = dependence_to_json(*zero.angle_certificate);
    out["borsuk"] = bj;
  }
  if (config.timing) out["wall_ms"] = elapsed_ms(start);
  return out;
}

json run_unplanted(const EquivalenceConfig& config, std::size_t trial, Recorder& rec) {
  const auto start = std::chrono::steady_clock::now();
  const Instance inst = unplanted_trial_instance(config, trial);
  json out{{"seed", inst.seed}, {"sets", inst.family.size()}, {"layout", inst.note}};

  const CommonPoint truth = common_point(inst.family, Arithmetic::rational);
  json cj{{"exists", truth.exists()}, {"exact", truth.certificate.exact}};
  if (truth.point) cj["point"] = *truth.point;
  else cj["farkas"] = truth.certificate.farkas;
  out["common_point"] = cj;

  ConsistencyConfig cc;
  cc.samples = config.samples;
  cc.seed = inst.seed;
  const ConsistencyVerdict verdict = check_dependency_consistency(inst.family, ConsistencyWitness::trivial(inst.family), cc);
  out["consistency"] = verdict_to_json(verdict, config.samples);

  std::string outcome = "agree";
  if (verdict.pass && !truth.exists()) {
    outcome = "sampled_pass_on_fail";
    rec.fail(trial, "unplanted", "sampled dependences missed a family without a common point");
  } else if (!verdict.pass && truth.exists()) {
    outcome = "false_fail";
    rec.fail(trial, "unplanted", "consistency failed on a family with a common point");
  }
  out["outcome"] = outcome;
  if (config.timing) out["wall_ms"] = elapsed_ms(start);
  return out;
}

}  // namespace

void EquivalenceConfig::validate() const {
  if (d < 1) throw MalformedInput("equivalence: d must be at least 1");
  if (min_sets < 1 || min_sets > max_sets) throw MalformedInput("equivalence: bad planted set range");
  if (unplanted_min_sets < 1 || unplanted_min_sets > unplanted_max_sets) {
    throw MalformedInput("equivalence: bad unplanted set range");
  }
  if (vertices_per_set < 1) throw MalformedInput("equivalence: sets need at least one vertex");
  if (search.starts < 1) throw MalformedInput("equivalence: at least one search start is required");
}

Instance planted_trial_instance(const EquivalenceConfig& config, std::size_t trial) {
  InstanceSpec spec;
  spec.seed = config.seed + trial;
  spec.d = config.d;
  spec.n_sets = pick_count(spec.seed, config.min_sets, config.max_sets);
  spec.vertices_per_set = config.vertices_per_set;
  spec.planted = true;
  return gen_instance(spec);
}

Instance unplanted_trial_instance(const EquivalenceConfig& config, std::size_t trial) {
  const std::uint64_t seed = config.seed + trial;
  const std::size_t n = pick_count(mix_seed(seed, 1), config.unplanted_min_sets, config.unplanted_max_sets);
  const auto layout = static_cast<SegmentLayout>(mix_seed(seed, 2) % (config.near_miss ? 3 : 2));
  return gen_segments(n, layout, seed);
}

json run_equivalence(const EquivalenceConfig& config) {
  config.validate();
  std::vector<json> records(config.trials);
  std::vector<Recorder> recorders(config.trials);
  parallel_for(0, config.trials, config.threads, [&](std::size_t t) {
    json r{{"trial", t}};
    Recorder& rec = recorders[t];
    try {
      if (config.planted) r["planted"] = run_planted(config, t, rec);
      if (config.unplanted) r["unplanted"] = run_unplanted(config, t, rec);
    } catch (const std::exception& e) {
      rec.fail(t, "error", e.what());
    }
    records[t] = std::move(r);
  });

  json trials = json::array();
  json failures = json::array();
  std::size_t consistency_pass = 0, direct_found = 0, borsuk_found = 0, cross_validated = 0;
  std::size_t with_point = 0, without_point = 0, agree = 0, missed = 0, false_fail = 0, exact_fails = 0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const json& r = records[t];
    if (auto it = r.find("planted"); it != r.end()) {
      const json& p = *it;
      consistency_pass += p["consistency"]["pass"].get<bool>();
      direct_found += p["direction"]["found"].get<bool>();
      if (auto b = p.find("borsuk"); b != p.end() && (*b)["found"].get<bool>()) {
        ++borsuk_found;
        cross_validated += (*b)["cross_validated"].get<bool>();
      }
    }
    if (auto it = r.find("unplanted"); it != r.end()) {
      const json& u = *it;
      (u["common_point"]["exists"].get<bool>() ? with_point : without_point) += 1;
      const auto outcome = u["outcome"].get<std::string>();
      agree += outcome == "agree";
      missed += outcome == "sampled_pass_on_fail";
      false_fail += outcome == "false_fail";
      if (!u["consistency"]["pass"].get<bool>()) exact_fails += u["consistency"]["exact_confirmed"].get<bool>();
    }
    for (auto& f : recorders[t].failures) failures.push_back(std::move(f));
    trials.push_back(r);
  }

  json aggregate = json::object();
  if (config.planted) {
    aggregate["planted"] = json{{"trials", config.trials},
                                {"consistency_pass", consistency_pass},
                                {"direction_found", direct_found}};
    if (config.borsuk) {
      aggregate["planted"]["borsuk_found"] = borsuk_found;
      aggregate["planted"]["borsuk_cross_validated"] = cross_validated;
    }
  }
  if (config.unplanted) {
    aggregate["unplanted"] = json{{"trials", config.trials},
                                  {"common_point", with_point},
                                  {"no_common_point", without_point},
                                  {"agree", agree},
                                  {"sampled_pass_on_fail", missed},
                                  {"false_fail", false_fail},
                                  {"exact_confirmed_fails", exact_fails}};
  }
  return json{{"version", kVersion},
              {"seed", config.seed},
              {"config", to_json(config)},
              {"trials", trials},
              {"aggregate", aggregate},
              {"assertion_failures", failures}};
}

json recheck_report(const json& report) {
  const EquivalenceConfig config = equivalence_config_from_json(report.at("config"));
  std::size_t checked = 0;
  json discrepancies = json::array();
  auto discrepancy = [&](std::size_t trial, const std::string& what) {
    discrepancies.push_back(json{{"trial", trial}, {"what", what}});
  };

  for (const auto& r : report.at("trials")) {
    const std::size_t t = r.at("trial").get<std::size_t>();
    if (auto it = r.find("planted"); it != r.end()) {
      const json& p = *it;
      const Instance inst = planted_trial_instance(config, t);
      const auto& cons = p.at("consistency");
      if (!cons.at("pass").get<bool>() && cons.contains("violation")) {
        ++checked;
        if (lift_dependence(inst.family, dependence_from_json(cons["violation"]), Arithmetic::rational).lifted()) {
          discrepancy(t, "planted violation lifts in rational arithmetic");
        }
      }
      for (const char* key : {"direction", "borsuk"}) {
        auto s = p.find(key);
        if (s == p.end() || !s->contains("hyperplane")) continue;
        ++checked;
        const auto h = complex_hyperplane_from_json((*s)["hyperplane"]);
        const double tol = (*s)["verify"]["tol"].get<double>();
        if (verify_transversal(h, inst.family, tol).pass != (*s)["verify"]["pass"].get<bool>()) {
          discrepancy(t, std::string(key) + " hyperplane verification differs");
        }
      }
    }
    if (auto it = r.find("unplanted"); it != r.end()) {
      const json& u = *it;
      const Instance inst = unplanted_trial_instance(config, t);
      ++checked;
      const CommonPoint exact = common_point(inst.family, Arithmetic::rational);
      if (exact.exists() != u.at("common_point").at("exists").get<bool>()) {
        discrepancy(t, "common-point decision differs in rational arithmetic");
      }
      if (exact.exists() && u["common_point"].contains("point")) {
        const auto pt = u["common_point"]["point"].get<RealVector>();
        const Complex z{pt.at(0), pt.at(1)};
        for (const auto& s : inst.family) {
          if (distance_to_polygon(project_along(ComplexVector{Complex{1.0, 0.0}}, s.polytope), z) > 1e-9) {
            discrepancy(t, "stored common point misses set '" + s.label + "'");
          }
        }
      }
      const auto& cons = u.at("consistency");
      if (!cons.at("pass").get<bool>() && cons.contains("violation")) {
        ++checked;
        if (lift_dependence(inst.family, dependence_from_json(cons["violation"]), Arithmetic::rational).lifted()) {
          discrepancy(t, "violation lifts in rational arithmetic");
        }
      }
    }
  }
  return json{{"checked", checked}, {"discrepancies", discrepancies}};
}

json to_json(const EquivalenceConfig& c) {
  const SearchConfig& s = c.search;
  return json{{"trials", c.trials},
              {"d", c.d},
              {"seed", c.seed},
              {"min_sets", c.min_sets},
              {"max_sets", c.max_sets},
              {"vertices_per_set", c.vertices_per_set},
              {"samples", c.samples},
              {"planted", c.planted},
              {"unplanted", c.unplanted},
              {"unplanted_min_sets", c.unplanted_min_sets},
              {"unplanted_max_sets", c.unplanted_max_sets},
              {"near_miss", c.near_miss},
              {"borsuk", c.borsuk},
              {"search",
               {{"starts", s.starts},
                {"iterations", s.iterations},
                {"step_decay", s.step_decay},
                {"initial_step", s.initial_step},
                {"seed", s.seed},
                {"margin_tol", s.margin_tol},
                {"grid", s.grid},
                {"zero_tol", s.zero_tol},
                {"polish_tol", s.polish_tol},
                {"verify_tol", s.verify_tol}}}};
}

EquivalenceConfig equivalence_config_from_json(const json& j) {
  EquivalenceConfig c;
  c.trials = j.at("trials").get<std::size_t>();
  c.d = j.at("d").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.min_sets = j.at("min_sets").get<std::size_t>();
  c.max_sets = j.at("max_sets").get<std::size_t>();
  c.vertices_per_set = j.at("vertices_per_set").get<std::size_t>();
  c.samples = j.at("samples").get<std::size_t>();
  c.planted = j.at("planted").get<bool>();
  c.unplanted = j.at("unplanted").get<bool>();
  c.unplanted_min_sets = j.at("unplanted_min_sets").get<std::size_t>();
  c.unplanted_max_sets = j.at("unplanted_max_sets").get<std::size_t>();
  c.near_miss = j.at("near_miss").get<bool>();
  c.borsuk = j.at("borsuk").get<bool>();
  const json& s = j.at("search");
  c.search.starts = s.at("starts").get<std::size_t>();
  c.search.iterations = s.at("iterations").get<std::size_t>();
  c.search.step_decay = s.at("step_decay").get<double>();
  c.search.initial_step = s.at("initial_step").get<double>();
  c.search.seed = s.at("seed").get<std::uint64_t>();
  c.search.margin_tol = s.at("margin_tol").get<double>();
  c.search.grid = s.at("grid").get<std::size_t>();
  c.search.zero_tol = s.at("zero_tol").get<double>();
  c.search.polish_tol = s.at("polish_tol").get<double>();
  c.search.verify_tol = s.at("verify_tol").get<double>();
  return c;
}

}  // namespace tvlab
