#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "tvlab/consistency.hpp"
#include "tvlab/equivalence.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/instance.hpp"
#include "tvlab/linalg.hpp"
#include "tvlab/lp.hpp"
#include "tvlab/random.hpp"
#include "tvlab/transversal.hpp"

using namespace tvlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Complex box_complex(Rng& rng) { return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}; }

ComplexVector box_vector(Rng& rng, std::size_t d) {
  ComplexVector v(d);
  for (auto& c : v) c = box_complex(rng);
  return v;
}

SpherePoint random_sphere(Rng& rng, std::size_t n) {
  ComplexVector v(n);
  for (auto& c : v) c = rng.complex_normal();
  return SpherePoint::normalized(std::move(v));
}

EquivalenceConfig corpus_config() {
  EquivalenceConfig cfg;
  cfg.trials = 200;
  cfg.d = 2;
  cfg.seed = 0;
  cfg.min_sets = 3;
  cfg.max_sets = 6;
  cfg.samples = 64;
  cfg.search.starts = 32;
  return cfg;
}

Outcome necessity() {
  const auto cfg = corpus_config();
  const auto start = std::chrono::steady_clock::now();
  std::size_t passed = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Instance inst = planted_trial_instance(cfg, t);
    const auto w = witness_from_transversal(inst.family, *inst.planted);
    ConsistencyConfig cc;
    cc.samples = cfg.samples;
    passed += check_dependency_consistency(inst.family, w, cc).pass;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu/200 planted consistency passes in %.1f s", passed, secs);
  return {passed == 200 && secs < 120.0, buf};
}

Outcome one_dimensional() {
  const auto cfg = corpus_config();
  std::size_t agree = 0, missed = 0, false_fail = 0, with_point = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Instance inst = unplanted_trial_instance(cfg, t);
    const bool exists = common_point(inst.family, Arithmetic::rational).exists();
    ConsistencyConfig cc;
    cc.samples = 64;
    const bool pass = check_dependency_consistency(inst.family, ConsistencyWitness::trivial(inst.family), cc).pass;
    with_point += exists;
    if (pass == exists) {
      ++agree;
    } else if (pass) {
      ++missed;
    } else {
      ++false_fail;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/200 agree (%zu with a common point), %zu sampled passes on fails, %zu false fails",
                agree, with_point, missed, false_fail);
  return {agree >= 198 && false_fail == 0, buf};
}

Outcome oddness() {
  Rng rng(20240601);
  std::size_t odd_violations = 0, vi_violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t d = 1 + rng.index(3);
    const std::size_t n = 1 + rng.index(5);
    std::vector<LabeledSet> sets;
    ConsistencyWitness w;
    w.k = d - 1;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<ComplexVector> verts;
      const std::size_t m = 1 + rng.index(5);
      for (std::size_t v = 0; v < m; ++v) verts.push_back(embed_h(box_vector(rng, d)));
      sets.push_back({"F" + std::to_string(s), Polytope::from_complex(verts)});
      w.complex_points.push_back(box_vector(rng, d - 1));
      w.assignment[sets.back().label] = s;
    }
    const Family f(std::move(sets));
    const auto x = random_sphere(rng, d + 1);
    const auto a = borsuk_map(x, f, w).as_real();
    const auto b = borsuk_map(-x, f, w).as_real();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] + b[i]) * (a[i] + b[i]);
    worst = std::max(worst, std::sqrt(s));
    odd_violations += std::sqrt(s) > 1e-10;
    for (const auto& set : f) {
      const auto poly = project_polytope(x, set.polytope);
      const Complex q = closest_coeff(poly);
      for (const auto& c : poly.vertices) vi_violations += (std::conj(q) * c).real() < std::norm(q) - 1e-9;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "10000 draws, %zu oddness and %zu variational violations, max |f(-x)+f(x)| = %.2e",
                odd_violations, vi_violations, worst);
  return {odd_violations == 0 && vi_violations == 0, buf};
}

Outcome borsuk() {
  const auto cfg = corpus_config();
  std::size_t found = 0, cross = 0, tight = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Instance inst = planted_trial_instance(cfg, t);
    const auto w = witness_from_transversal(inst.family, *inst.planted);
    const auto z = find_borsuk_zero(embed_family(inst.family), w, cfg.search);
    if (!z.found() || z.residual > 1e-6 || !verify_transversal(*z.hyperplane, inst.family, 1e-4).pass) continue;
    ++found;
    tight += verify_transversal(*z.hyperplane, inst.family, 1e-6).pass;
    const auto direct = find_complex_transversal(inst.family, cfg.search);
    cross += direct.hyperplane && verify_transversal(*direct.hyperplane, inst.family, 1e-6).pass;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu/200 zeros found, %zu/%zu cross-validated, %zu/%zu verify at 1e-6", found, cross,
                found, tight, found);
  return {found >= 190 && cross == found, buf};
}

Outcome kirchberger() {
  Rng rng(20240602);
  std::size_t agree = 0, separated = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 1 + rng.index(3);
    const std::size_t nu = 1 + rng.index(9);
    const std::size_t nv = 1 + rng.index(10 - nu);
    const double shift = rng.uniform(0.0, 2.5);
    std::vector<RealVector> u(nu, RealVector(k)), v(nv, RealVector(k));
    for (auto& p : u) {
      for (auto& x : p) x = rng.uniform(-1.0, 1.0);
    }
    for (auto& p : v) {
      for (auto& x : p) x = rng.uniform(-1.0, 1.0);
      p[0] += shift;
    }
    const bool full = !hulls_intersect(Polytope::from_real(u), Polytope::from_real(v)).intersect();
    const bool kb = kirchberger_separated(u, v, k).separated;
    agree += kb == full;
    separated += full;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu/500 verdicts agree (%zu separated)", agree, separated);
  return {agree == 500, buf};
}

Outcome caratheodory() {
  Rng rng(20240603);
  std::size_t ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + rng.index(3);
    const std::size_t n = std::min<std::size_t>(10, k + 3 + rng.index(8));
    std::vector<ComplexVector> images(n);
    for (auto& p : images) p = box_vector(rng, k);
    std::vector<ComplexVector> rows(k + 1, ComplexVector(n));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t c = 0; c < k; ++c) rows[c][j] = images[j][c];
      rows[k][j] = 1.0;
    }
    AffineDependence full;
    full.coefficients.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) full.support.push_back(j);
    for (const auto& b : linalg::null_space(rows, n)) {
      const Complex w = rng.complex_normal();
      for (std::size_t j = 0; j < n; ++j) full.coefficients[j] += w * b[j];
    }
    const auto red = reduce_support(full, images, k);
    const double res = red.dependence.residual(images);
    worst = std::max(worst, res);
    ok += red.dependence.support.size() <= 2 * k + 3 && res <= 1e-9 && !red.dependence.support.empty();
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu/200 reductions within 2k+3 labels, max residual %.2e", ok, worst);
  return {ok == 200, buf};
}

Outcome trivial_fails() {
  Rng rng(20240604);
  std::size_t confirmed = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 1 + rng.index(3);
    const std::size_t k = rng.index(3);
    const std::size_t n = 2 + rng.index(3);
    const ComplexVector image = box_vector(rng, k);
    std::vector<LabeledSet> sets;
    ConsistencyWitness w;
    w.k = k;
    for (std::size_t s = 0; s < n; ++s) {
      ComplexVector p = box_vector(rng, d);
      p[0] += static_cast<double>(3 * s);
      sets.push_back({"F" + std::to_string(s), Polytope::from_complex({p})});
      w.complex_points.push_back(image);
      w.assignment[sets.back().label] = s;
    }
    const auto v = check_dependency_consistency(Family(std::move(sets)), w);
    confirmed += !v.pass && v.exact_confirmed;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu/50 constructions fail with a rational NoLift", confirmed);
  return {confirmed == 50, buf};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no --cli given"};
  std::string reports[2];
  for (int r = 0; r < 2; ++r) {
    const std::string out = "acceptance_equiv_" + std::to_string(r) + ".json";
    const std::string cmd = "\"" + cli + "\" equiv --trials 50 --d 2 --seed 7 -o " + out + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return {false, "could not run the CLI"};
    reports[r] = slurp(out);
  }
  if (reports[0].empty()) return {false, "the CLI wrote no report"};
  const bool same = reports[0] == reports[1];
  return {same, std::to_string(reports[0].size()) + " byte reports " + (same ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli;
  app.add_option("--cli", cli, "path to the tvlab executable");
  CLI11_PARSE(app, argc, argv);

  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"necessity suite", necessity},      {"d = 1 equivalence", one_dimensional},
      {"oddness and projection", oddness}, {"odd-map zeros", borsuk},
      {"kirchberger", kirchberger},        {"support reduction", caratheodory},
      {"trivial fails", trivial_fails},
  };
  int failures = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  int n = 1;
  for (const auto& [name, run] : criteria) {
    try {
      report(n, name, run());
    } catch (const std::exception& e) {
      report(n, name, {false, std::string("error: ") + e.what()});
    }
    ++n;
  }
  report(8, "determinism", determinism(cli));
  return failures == 0 ? 0 : 1;
}
