#include <doctest.h>

#include "tvlab/equivalence.hpp"

using namespace tvlab;

namespace {

EquivalenceConfig small_config() {
  EquivalenceConfig cfg;
  cfg.trials = 12;
  cfg.seed = 300;
  cfg.samples = 16;
  cfg.search.starts = 16;
  return cfg;
}

}  // namespace

TEST_SUITE("equivalence") {
  TEST_CASE("zero trials give an empty valid report") {
    EquivalenceConfig cfg;
    const auto report = run_equivalence(cfg);
    CHECK(report["version"] == kVersion);
    CHECK(report["trials"].empty());
    CHECK(report["assertion_failures"].empty());
    CHECK(report["aggregate"]["planted"]["trials"] == 0);
    CHECK(recheck_report(report)["discrepancies"].empty());
  }

  TEST_CASE("invalid configurations are rejected") {
    EquivalenceConfig cfg;
    cfg.min_sets = 5;
    cfg.max_sets = 4;
    CHECK_THROWS_AS(run_equivalence(cfg), MalformedInput);
    cfg = {};
    cfg.search.starts = 0;
    CHECK_THROWS_AS(cfg.validate(), MalformedInput);
  }

  TEST_CASE("reports are deterministic and independent of the thread count") {
    EquivalenceConfig cfg = small_config();
    const std::string a = run_equivalence(cfg).dump();
    CHECK(run_equivalence(cfg).dump() == a);
    cfg.threads = 3;
    cfg.search.threads = 2;
    auto threaded = run_equivalence(cfg);
    threaded["config"] = run_equivalence(small_config())["config"];
    CHECK(threaded.dump() == a);
  }

  TEST_CASE("a small run agrees and survives the exact recheck") {
    const auto report = run_equivalence(small_config());
    const auto& agg = report["aggregate"];
    CHECK(agg["planted"]["consistency_pass"] == 12);
    CHECK(agg["planted"]["direction_found"] == 12);
    CHECK(agg["unplanted"]["false_fail"] == 0);
    CHECK(agg["unplanted"]["common_point"].get<int>() + agg["unplanted"]["no_common_point"].get<int>() == 12);
    const auto recheck = recheck_report(report);
    CHECK(recheck["checked"].get<int>() > 0);
    CHECK(recheck["discrepancies"].empty());
  }

  TEST_CASE("trial instances regenerate from the configuration") {
    const EquivalenceConfig cfg = small_config();
    CHECK(serialize_instance(planted_trial_instance(cfg, 4)) == serialize_instance(planted_trial_instance(cfg, 4)));
    const auto p = planted_trial_instance(cfg, 4);
    CHECK(p.family.size() >= cfg.min_sets);
    CHECK(p.family.size() <= cfg.max_sets);
    const auto u = unplanted_trial_instance(cfg, 5);
    CHECK(u.d == 1);
    CHECK(u.family.size() >= cfg.unplanted_min_sets);
    CHECK(u.family.size() <= cfg.unplanted_max_sets);
  }

  TEST_CASE("configuration round trip") {
    EquivalenceConfig cfg = small_config();
    cfg.near_miss = true;
    cfg.borsuk = false;
    cfg.search.verify_tol = 3e-4;
    const auto back = equivalence_config_from_json(to_json(cfg));
    CHECK(to_json(back).dump() == to_json(cfg).dump());
  }

  TEST_CASE("a tampered violation is reported by the recheck") {
    EquivalenceConfig cfg = small_config();
    cfg.trials = 4;
    cfg.borsuk = false;
    auto report = run_equivalence(cfg);
    // Claim the common point of a concurrent family is absent.
    bool tampered = false;
    for (auto& r : report["trials"]) {
      auto& cp = r["unplanted"]["common_point"];
      if (cp["exists"].get<bool>()) {
        cp["exists"] = false;
        tampered = true;
        break;
      }
    }
    if (tampered) CHECK_FALSE(recheck_report(report)["discrepancies"].empty());
  }
}
