// Acceptance runner: one PASS/FAIL line per criterion, built on the same checks the CLI
// reports. --expect-fail=6,8 turns known failures into a zero exit status (they still
// print FAIL); an expected failure that passes is an error.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beltrami/report.hpp"

using namespace beltrami;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::string command;
  std::string manifold;
  std::function<bool(const CheckRecord&)> select;
  double budget_seconds;  // 0: no runtime requirement
  std::string note;       // shown after failures
};

bool prefix(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }
auto any_of(std::vector<std::string> prefixes) {
  return [prefixes](const CheckRecord& c) {
    for (const auto& p : prefixes)
      if (prefix(c.id, p)) return true;
    return false;
  };
}
auto all_checks() {
  return [](const CheckRecord&) { return true; };
}

std::vector<Criterion> criteria() {
  return {
      {1, "atlas exactness", "verify-atlas", "s3", any_of({"curl-", "gram-"}), 10, ""},
      {2, "multiplicities", "verify-atlas", "s3", any_of({"multiplicity-", "projections-"}), 60, ""},
      {3, "constants table", "verify-identities", "s3", all_checks(), 0, ""},
      {4, "correction field", "taylor-check", "s3", any_of({"correction-"}), 0, ""},
      {5, "derivative fidelity", "taylor-check", "s3", any_of({"fd-"}), 0, ""},
      {6, "sixth-order structure (tabulated constants)", "taylor-check", "s3",
       any_of({"d6F-z2-tabulated", "taylor6-leading-tabulated"}), 0,
       "the expected constants come from a -1755 coefficient in the sixth energy derivative where "
       "the binomial series gives -1989; the corrected values -145/18 and 17/144 pass "
       "(d6F-z2-corrected, taylor6-leading-corrected)"},
      {7, "local maximality of R", "local-max-scan", "s3", any_of({"local-max-"}), 300, ""},
      {8, "second-variation threshold on RP3 directions", "local-max-scan", "s3",
       any_of({"rp3-second-variation-threshold"}), 0,
       "every draw is negative but the sup over the admissible span is about -0.0025 > -0.01"},
      {9, "conformal optimality scans (s3, rp3)", "optimality-scan", "s3+rp3", all_checks(), 900, ""},
      {10, "torus non-optimality", "optimality-scan", "t3",
       any_of({"abc-speed-not-constant", "abc-first-variation", "torus-descent-derivative"}), 0, ""},
      {11, "annulus", "annulus", "s3", all_checks(), 0, ""},
      {12, "bound constants", "bounds", "s3", all_checks(), 0, ""},
  };
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string expect_fail, only;
  std::uint64_t seed = RunConfig{}.seed;
  app.add_option("--expect-fail", expect_fail, "Comma-separated criteria allowed to fail");
  app.add_option("--only", only, "Comma-separated criteria to run");
  app.add_option("--seed", seed, "Seed for every randomized check");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> xfail = parse_list(expect_fail), selected = parse_list(only);

  // One execution per (command, manifold), shared by the criteria that read it.
  std::map<std::string, Report> cache;
  auto reports = [&](const std::string& command, const std::string& manifolds) {
    std::vector<const Report*> out;
    std::stringstream ss(manifolds);
    std::string m;
    while (std::getline(ss, m, '+')) {
      const std::string key = command + "/" + m;
      if (!cache.count(key)) {
        RunConfig c;
        c.command = command;
        c.manifold = m;
        c.seed = seed;
        cache.emplace(key, execute(c));
      }
      out.push_back(&cache.at(key));
    }
    return out;
  };

  int unexpected = 0;
  for (const Criterion& c : criteria()) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    int total = 0, passed = 0;
    double seconds = 0.0;
    std::string first_failure;
    for (const Report* r : reports(c.command, c.manifold)) {
      double selected_time = 0.0;
      for (const auto& ch : r->checks) {
        if (!c.select(ch)) continue;
        ++total;
        selected_time += ch.wall_time;
        if (ch.pass) {
          ++passed;
        } else if (first_failure.empty()) {
          char buf[256];
          std::snprintf(buf, sizeof buf, "%s: expected %s, computed %.10g", ch.id.c_str(),
                        ch.expected_exact.c_str(), ch.computed);
          first_failure = buf;
        }
      }
      // Record times cover the work since the previous record, so the selected ones add up
      // to the cost of this criterion.
      seconds += selected_time;
    }
    const bool within_budget = c.budget_seconds <= 0 || seconds < c.budget_seconds;
    const bool pass = total > 0 && passed == total && within_budget;
    const bool expected_failure = xfail.count(c.number) > 0;
    std::printf("criterion %2d: %s  %s (%d/%d checks, %.1f s%s)", c.number, pass ? "PASS" : "FAIL", c.title.c_str(),
                passed, total, seconds, within_budget ? "" : ", over budget");
    if (!pass && !first_failure.empty()) std::printf(" first failure %s", first_failure.c_str());
    if (!pass && expected_failure) std::printf(" [expected failure: %s]", c.note.c_str());
    if (pass && expected_failure) std::printf(" [unexpected pass]");
    std::printf("\n");
    std::fflush(stdout);
    if (pass == expected_failure) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
