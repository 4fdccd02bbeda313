#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tvlab/consistency.hpp"
#include "tvlab/equivalence.hpp"
#include "tvlab/instance.hpp"
#include "tvlab/json_writer.hpp"
#include "tvlab/svg.hpp"
#include "tvlab/transversal.hpp"

namespace {

using nlohmann::json;
using namespace tvlab;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

void emit(const json& j, const std::string& path) {
  const std::string text = dump_json(j);
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    save_text(path, text);
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw MalformedInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Stored witness, else one read off the planted transversal, else the trivial
// witness when it is the right one (complex d = 1).
std::optional<ConsistencyWitness> resolve_witness(const Instance& inst) {
  if (inst.witness) return inst.witness;
  if (inst.planted) return witness_from_transversal(inst.family, *inst.planted);
  if (inst.planted_real) return witness_from_transversal(inst.family, *inst.planted_real);
  if (inst.ambient == Ambient::complex && inst.d == 1) return ConsistencyWitness::trivial(inst.family);
  return std::nullopt;
}

json dependence_json(const AffineDependence& dep) {
  json coeffs = json::array();
  for (const Complex& c : dep.coefficients) coeffs.push_back(complex_to_json(c));
  return json{{"support", dep.support}, {"coefficients", coeffs}};
}

struct GenArgs {
  std::size_t d = 2;
  std::size_t sets = 3;
  std::size_t verts = 4;
  bool planted = false;
  bool with_witness = false;
  std::uint64_t seed = 0;
  std::string ambient = "complex";
  std::string out;
};

int run_gen(const GenArgs& a) {
  InstanceSpec spec;
  spec.d = a.d;
  spec.n_sets = a.sets;
  spec.vertices_per_set = a.verts;
  spec.planted = a.planted;
  spec.seed = a.seed;
  spec.ambient = ambient_from_string(a.ambient);
  Instance inst = gen_instance(spec);
  if (a.with_witness) {
    if (!a.planted) throw MalformedInput("--witness needs --planted");
    inst.witness = resolve_witness(inst);
  }
  const std::string text = serialize_instance(inst);
  if (a.out.empty() || a.out == "-") std::cout << text;
  else save_text(a.out, text);
  return kPass;
}

struct CheckArgs {
  std::string instance;
  std::size_t samples = 64;
  double tol = 1e-9;
  bool exact = false;
  std::uint64_t seed = 0;
};

int run_check(const CheckArgs& a) {
  const Instance inst = load_instance(a.instance);
  const auto witness = resolve_witness(inst);
  if (!witness) throw MalformedInput("instance has no witness and no planted transversal");
  ConsistencyVerdict v;
  if (inst.ambient == Ambient::complex) {
    ConsistencyConfig cc;
    cc.samples = a.samples;
    cc.tol = a.tol;
    cc.exact = a.exact;
    cc.seed = a.seed;
    v = check_dependency_consistency(inst.family, *witness, cc);
  } else {
    v = separates_consistently(inst.family, *witness, a.exact ? Arithmetic::rational : Arithmetic::floating);
  }
  json out{{"pass", v.pass},
           {"dependences_checked", v.dependences_checked},
           {"sampled_directions", v.samples},
           {"exact_confirmed", v.exact_confirmed}};
  if (v.violation) out["violation"] = dependence_json(*v.violation);
  if (v.violating_pair) out["violating_pair"] = {v.violating_pair->first, v.violating_pair->second};
  emit(out, "-");
  return v.pass ? kPass : kFail;
}

struct FindArgs {
  std::string instance;
  std::string method = "direction";
  SearchConfig search;
  std::string out;
};

int run_find(const FindArgs& a) {
  const Instance inst = load_instance(a.instance);
  json out{{"ambient", to_string(inst.ambient)}, {"method", a.method}};
  bool found = false;
  if (a.method == "direction") {
    if (inst.ambient == Ambient::complex) {
      const auto r = find_complex_transversal(inst.family, a.search);
      out["best_margin"] = r.best_margin;
      out["evaluations"] = r.evaluations;
      if (r.hyperplane) {
        out.update(to_json(*r.hyperplane));
        out["verify"] = verify_transversal(*r.hyperplane, inst.family, a.search.verify_tol).max_distance;
        found = true;
      }
    } else {
      const auto r = real_hyperplane_transversal(inst.family, a.search);
      out["best_margin"] = r.best_margin;
      out["exhaustive"] = r.exhaustive;
      if (r.hyperplane) {
        out.update(to_json(*r.hyperplane));
        out["verify"] = verify_transversal(*r.hyperplane, inst.family, a.search.verify_tol).max_distance;
        found = true;
      }
    }
  } else if (a.method == "borsuk") {
    if (inst.ambient != Ambient::complex) throw MalformedInput("the borsuk method needs a complex instance");
    const auto witness = resolve_witness(inst);
    if (!witness) throw MalformedInput("the borsuk method needs a witness or a planted transversal");
    const auto r = find_borsuk_zero(embed_family(inst.family), *witness, a.search);
    out["residual"] = r.residual;
    out["starts_used"] = r.starts_used;
    out["pole_rejections"] = r.pole_rejections;
    if (r.zero) {
      json x = json::array();
      for (const Complex& c : r.zero->coords()) x.push_back(complex_to_json(c));
      out["zero"] = x;
    }
    if (r.hyperplane) {
      out.update(to_json(*r.hyperplane));
      out["verify"] = verify_transversal(*r.hyperplane, inst.family, a.search.verify_tol).max_distance;
      found = true;
    }
    if (r.angle_certificate) out["angle_certificate"] = dependence_json(*r.angle_certificate);
  } else {
    throw MalformedInput("unknown method '" + a.method + "'");
  }
  out["found"] = found;
  emit(out, a.out);
  return found ? kPass : kFail;
}

struct VerifyArgs {
  std::string instance;
  std::string transversal;
  double tol = 1e-6;
};

int run_verify(const VerifyArgs& a) {
  const Instance inst = load_instance(a.instance);
  const json t = load_json(a.transversal);
  const TransversalReport rep = inst.ambient == Ambient::complex
                                    ? verify_transversal(complex_hyperplane_from_json(t), inst.family, a.tol)
                                    : verify_transversal(real_hyperplane_from_json(t), inst.family, a.tol);
  emit(json{{"pass", rep.pass}, {"max_distance", rep.max_distance}, {"distances", rep.distances}, {"tol", a.tol}},
       "-");
  return rep.pass ? kPass : kFail;
}

struct EquivArgs {
  EquivalenceConfig config;
  bool no_borsuk = false;
  bool no_recheck = false;
  std::string out;
};

int run_equiv(EquivArgs a) {
  a.config.borsuk = !a.no_borsuk;
  json report = run_equivalence(a.config);
  bool clean = report["assertion_failures"].empty();
  if (!a.no_recheck) {
    report["recheck"] = recheck_report(report);
    clean = clean && report["recheck"]["discrepancies"].empty();
  }
  emit(report, a.out);
  return clean ? kPass : kFail;
}

struct PlotArgs {
  std::string instance;
  std::string out;
  std::vector<std::size_t> axes;
  bool panel = false;
  std::size_t panel_set = 0;
  std::string transversal;
};

int run_plot(const PlotArgs& a) {
  const Instance inst = load_instance(a.instance);
  PlotOptions opt;
  if (!a.axes.empty()) {
    if (a.axes.size() != 2) throw MalformedInput("--axes takes two indices");
    opt.axes = std::array<std::size_t, 2>{a.axes[0], a.axes[1]};
  }
  if (!a.transversal.empty()) opt.transversal = complex_hyperplane_from_json(load_json(a.transversal));
  if (a.panel) {
    const auto witness = resolve_witness(inst);
    if (!witness || inst.ambient != Ambient::complex) {
      throw MalformedInput("--panel needs a complex instance with a witness");
    }
    const auto r = find_borsuk_zero(embed_family(inst.family), *witness);
    if (!r.zero) throw MalformedInput("no zero of the odd map to draw");
    opt.panel_direction = *r.zero;
    opt.panel_set = a.panel_set;
  }
  const std::string svg = plot_instance(inst, opt);
  if (a.out.empty() || a.out == "-") std::cout << svg;
  else save_text(a.out, svg);
  return kPass;
}

void add_search_options(CLI::App* cmd, SearchConfig& s) {
  cmd->add_option("--starts", s.starts, "Multistart count")->check(CLI::PositiveNumber);
  cmd->add_option("--zero-tol", s.zero_tol, "Residual accepted as a zero of the odd map");
  cmd->add_option("--verify-tol", s.verify_tol, "Distance tolerance for recovered hyperplanes");
  cmd->add_option("--iterations", s.iterations, "Iterations per start");
  cmd->add_option("--search-seed", s.seed, "Seed of the start directions");
  cmd->add_option("--threads", s.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tvlab: complex hyperplane transversals and dependency consistency"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random instance");
  g->add_option("--d", gen.d, "Dimension")->required()->check(CLI::PositiveNumber);
  g->add_option("--sets", gen.sets, "Number of sets")->required()->check(CLI::PositiveNumber);
  g->add_option("--verts", gen.verts, "Vertices per set")->required()->check(CLI::PositiveNumber);
  g->add_flag("--planted", gen.planted, "Plant a transversal");
  g->add_flag("--witness", gen.with_witness, "Store the witness read off the planted transversal");
  g->add_option("--seed", gen.seed, "Seed")->required();
  g->add_option("--ambient", gen.ambient, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  g->add_option("-o,--output", gen.out, "Output file (stdout if omitted)");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Check dependency consistency against the witness");
  c->add_option("instance", check.instance)->required();
  c->add_option("--samples", check.samples, "Directions per subfamily with a larger dependence space");
  c->add_option("--tol", check.tol, "Residual tolerance");
  c->add_flag("--exact", check.exact, "Confirm failures in rational arithmetic");
  c->add_option("--seed", check.seed, "Sampling seed");

  FindArgs find;
  auto* f = app.add_subcommand("find", "Search for a transversal hyperplane");
  f->add_option("instance", find.instance)->required();
  f->add_option("--method", find.method)->check(CLI::IsMember({"direction", "borsuk"}));
  add_search_options(f, find.search);
  f->add_option("-o,--output", find.out, "Output file (stdout if omitted)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Verify a transversal against an instance");
  v->add_option("instance", verify.instance)->required();
  v->add_option("--transversal", verify.transversal)->required();
  v->add_option("--tol", verify.tol, "Distance tolerance");

  EquivArgs equiv;
  auto* e = app.add_subcommand("equiv", "Run the equivalence experiment");
  e->add_option("--trials", equiv.config.trials)->required();
  e->add_option("--d", equiv.config.d)->required()->check(CLI::PositiveNumber);
  e->add_option("--seed", equiv.config.seed)->required();
  e->add_option("--samples", equiv.config.samples);
  e->add_option("--min-sets", equiv.config.min_sets);
  e->add_option("--max-sets", equiv.config.max_sets);
  e->add_flag("--near-miss", equiv.config.near_miss, "Add near-miss segment families to the d = 1 branch");
  e->add_flag("--timing", equiv.config.timing, "Record wall times (reports stop being byte-stable)");
  e->add_flag("--no-borsuk", equiv.no_borsuk, "Skip the zero search of the odd map");
  e->add_flag("--no-recheck", equiv.no_recheck, "Skip the rational re-check pass");
  add_search_options(e, equiv.config.search);
  e->add_option("--trial-threads", equiv.config.threads, "Trials run concurrently")->check(CLI::PositiveNumber);
  e->add_option("-o,--output", equiv.out, "Output file (stdout if omitted)");

  PlotArgs plot;
  auto* p = app.add_subcommand("plot", "Draw an instance as SVG");
  p->add_option("instance", plot.instance)->required();
  p->add_option("-o,--output", plot.out, "Output file (stdout if omitted)");
  p->add_option("--axes", plot.axes, "Two real coordinates spanning the drawing plane")->expected(2);
  p->add_option("--transversal", plot.transversal, "Hyperplane file to draw");
  p->add_flag("--panel", plot.panel, "Add the projected-polygon panel at a zero of the odd map");
  p->add_option("--panel-set", plot.panel_set, "Set shown in the panel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*c) return run_check(check);
    if (*f) return run_find(find);
    if (*v) return run_verify(verify);
    if (*e) return run_equiv(equiv);
    if (*p) return run_plot(plot);
  } catch (const MalformedInput& err) {
    std::cerr << "tvlab: " << err.what() << "\n";
    return kUsage;
  } catch (const DimensionError& err) {
    std::cerr << "tvlab: " << err.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "tvlab: invalid input: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "tvlab: " << err.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
