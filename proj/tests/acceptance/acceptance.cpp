// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "dot_check.hpp"
#include "example_types.hpp"
#include "random_types.hpp"
#include "sessub/async_checker.hpp"
#include "sessub/fair_checker.hpp"
#include "sessub/oracle.hpp"
#include "sessub/sync_checker.hpp"

namespace fs = std::filesystem;
using namespace sessub;
using namespace sessub::testing;

namespace {

Lts lts(const std::string& t) { return build_lts(parse(t)); }

std::string dual_text(const std::string& t) { return render(dual(parse(t))); }

// Collects the first broken expectation of a criterion.
struct Check {
  std::string why;
  void expect(bool ok, const std::string& what) {
    if (!ok && why.empty()) why = what;
  }
};

using Criterion = std::function<void(Check&)>;

void hospital_sync(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const CheckResult r = check_sync(lts(kHospitalClient2), lts(kHospitalClient));
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  c.expect(r.verdict == Verdict::True, "verdict is " + std::string(to_string(r.verdict)));
  c.expect(r.graph.failure_nodes().empty(), "graph has failure nodes");
  c.expect(r.graph.count_edges(EdgeStyle::Dashed) == 2,
           std::to_string(r.graph.count_edges(EdgeStyle::Dashed)) + " dashed back-links");
  c.expect(ms < 50.0, std::to_string(ms) + " ms");
}

void hospital_sync_negative(Check& c) {
  const CheckResult r = check_sync(lts(kHospitalClient2Bad), lts(kHospitalClient));
  c.expect(r.verdict == Verdict::False, "verdict is " + std::string(to_string(r.verdict)));
  c.expect(r.graph.failure_nodes().size() == 1,
           std::to_string(r.graph.failure_nodes().size()) + " failure nodes");
}

void hospital_async(Check& c) {
  AsyncOptions o;
  o.fallback = false;
  const CheckResult r = check_async(lts(kHospitalClient3), lts(kHospitalClient), o);
  c.expect(r.verdict == Verdict::True, "verdict is " + std::string(to_string(r.verdict)));
  c.expect(!r.fallback_used, "fallback used");
  bool tree = false;
  for (const auto& n : r.graph.nodes()) tree = tree || to_string(n.rhs) == "<ko:2,ok:2>";
  c.expect(tree, "no node with rhs <ko:2,ok:2>");
  bool growth = false;
  for (const auto& e : r.graph.edges()) growth = growth || (e.style == EdgeStyle::Dashed && e.growth);
  c.expect(growth && !r.accepted_loops.empty(), "no accepted growth back-link");
  c.expect(r.expanded <= 200, std::to_string(r.expanded) + " nodes expanded");
}

void satellite_async(Check& c) {
  const CheckResult r = check_async(lts(kSatelliteControl2), lts(kSatelliteControl));
  c.expect(r.verdict == Verdict::False, "verdict is " + std::string(to_string(r.verdict)));
  c.expect(r.failure_node == r.graph.root(), "failure not at the root");
}

void satellite_fair(Check& c) {
  const CheckResult r = check_fair(lts(kSatelliteControl2), lts(kSatelliteControl));
  const SimGraph& g = r.graph;
  c.expect(r.verdict == Verdict::True, "verdict is " + std::string(to_string(r.verdict)));
  bool tm_loop = false;
  for (const auto& e : g.edges()) {
    if (e.style != EdgeStyle::Dashed) continue;
    const auto* ctx = std::get_if<RecInputContext>(&g.node(e.to).rhs);
    const auto parent = g.parent(e.from);
    if (!ctx || !ctx->is_recursive() || !parent) continue;
    for (const auto& in : g.edges()) {
      if (in.style == EdgeStyle::Solid && in.to == e.from && in.action && to_string(*in.action) == "?tm") {
        tm_loop = true;
      }
    }
  }
  c.expect(tm_loop, "no ?tm back-link on a recursive context");
  bool clean = false;
  for (const auto& n : g.nodes()) {
    const auto* ctx = std::get_if<RecInputContext>(&n.rhs);
    clean = clean || (n.kind == NodeKind::Success && ctx && ctx->is_bare());
  }
  c.expect(clean, "no clean-termination success leaf");
}

void duality(Check& c) {
  const auto sync = check_sync(lts(dual_text(kHospitalClient)), lts(dual_text(kHospitalClient2)));
  c.expect(sync.verdict == Verdict::True, "sync dual: " + std::string(to_string(sync.verdict)));
  const auto async = check_async(lts(dual_text(kHospitalClient)), lts(dual_text(kHospitalClient3)));
  c.expect(async.verdict == Verdict::True, "async dual: " + std::string(to_string(async.verdict)));
  const auto fair = check_fair(lts(dual_text(kSatelliteControl)), lts(dual_text(kSatelliteControl2)));
  c.expect(fair.verdict == Verdict::True, "fair dual: " + std::string(to_string(fair.verdict)));
}

void unit_values(Check& c) {
  const Lts hc = lts(kHospitalClient);
  c.expect(inputs(hc, 1).empty(), "in(1)");
  c.expect(inputs(hc, 2) == LabelSet{"ko", "ok"}, "in(2)");
  c.expect(outputs(hc, 2).empty(), "out(2)");
  c.expect(outputs(hc, 1) == LabelSet{"nd", "pr"}, "out(1)");
  const auto t = intree(hc, 2);
  c.expect(t && t->to_string() == "<ko:1,ok:1>", "intree(2) = " + (t ? t->to_string() : "none"));
  const Lts loop = lts(kSendLoop);
  c.expect(loop.size() == 2, "send-loop LTS size");
  c.expect(has_cycle(loop, Polarity::Send, 1) && has_cycle(loop, Polarity::Send, 2), "cycle(!, 1/2)");
}

void properties(Check& c) {
  std::mt19937 rng(2024);
  AsyncOptions no_fb;
  no_fb.fallback = false;
  for (int i = 0; i < 200 && c.why.empty(); ++i) {
    const SessionType t = random_type(rng, 5);
    const SessionType u = random_type(rng, 5);
    const SessionType s = random_subtype(rng, t);
    const std::string text = render(t);
    const Lts lt = build_lts(t);
    c.expect(check_sync(lt, lt).verdict == Verdict::True, "sync reflexivity: " + text);
    c.expect(check_async(lt, lt, no_fb).verdict == Verdict::True, "async reflexivity: " + text);
    c.expect(parse(text) == t, "round-trip: " + text);
    c.expect(dual(dual(t)) == t, "dual involution: " + text);
    for (const auto& [a, b] : {std::pair{s, t}, std::pair{u, t}, std::pair{t, u}}) {
      const Lts la = build_lts(a), lb = build_lts(b);
      const Verdict tree = check_sync(la, lb).verdict;
      c.expect(tree == check_sync(la, lb, SyncMode::Memo).verdict, "mode agreement: " + render(a) + " <= " + render(b));
      if (tree == Verdict::True) {
        c.expect(check_async(la, lb).verdict != Verdict::False, "sync true, async false: " + render(a) + " <= " + render(b));
      }
    }
  }
}

OracleOptions oracle(OracleMode m) {
  OracleOptions o;
  o.mode = m;
  o.bound = 4;
  o.depth = 60;
  return o;
}

void oracle_agreement(Check& c) {
  auto clean = [&](const SessionType& s, const SessionType& t, OracleMode m) {
    const OracleResult r = explore(build_lts(s), build_lts(dual(t)), oracle(m));
    c.expect(r.ok(), render(s) + " vs dual of " + render(t) + ": " +
                         (r.violation ? to_string(r.violation->kind) + " after " + to_string(r.violation->trace) : ""));
  };
  clean(parse(kHospitalClient2), parse(kHospitalClient), OracleMode::Rendezvous);
  clean(parse(kHospitalClient3), parse(kHospitalClient), OracleMode::Fifo);
  clean(parse(kSatelliteControl2), parse(kSatelliteControl), OracleMode::Fair);

  std::mt19937 rng(77);
  for (int i = 0; i < 200; ++i) {
    const SessionType t = random_type(rng, 5);
    const SessionType s = random_subtype(rng, t);
    const Lts sub = build_lts(s), sup = build_lts(t);
    if (check_sync(sub, sup).verdict == Verdict::True) clean(s, t, OracleMode::Rendezvous);
    if (check_async(sub, sup).verdict == Verdict::True) clean(s, t, OracleMode::Fifo);
    if (controllable(sub) && controllable(sup) && check_fair(sub, sup).verdict == Verdict::True) {
      clean(s, t, OracleMode::Fair);
    }
  }

  const OracleResult bad =
      explore(lts(kHospitalClient2Bad), lts(dual_text(kHospitalClient)), oracle(OracleMode::Rendezvous));
  c.expect(!bad.ok(), "no violation for the ko1 client");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void output_contracts(Check& c) {
  const fs::path old = fs::current_path();
  const fs::path dir = fs::temp_directory_path() / "sessub_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::current_path(dir);

  const std::regex line(R"(^(sync|async|fair): (true|false|maybe) \(\d+ ms\)$)");
  const std::vector<std::pair<std::string, std::string>> problems{
      {kHospitalClient2, kHospitalClient}, {kHospitalClient2Bad, kHospitalClient},
      {kHospitalClient3, kHospitalClient}, {kSatelliteControl2, kSatelliteControl}};
  for (const auto& [sub, sup] : problems) {
    std::string first;
    for (int round = 0; round < 2; ++round) {
      std::ostringstream out, err;
      cli::run({"--all", "--pics", "--out", "sim.dot", sub, sup}, out, err);
      std::istringstream lines(out.str());
      for (std::string l; std::getline(lines, l);) c.expect(std::regex_match(l, line), "bad verdict line: " + l);
      std::string dots;
      for (const char* alg : {"sync", "async", "fair"}) {
        const fs::path p = std::string("sim_") + alg + ".dot";
        if (!fs::exists(p)) continue;
        const std::string dot = slurp(p);
        const std::string e = dot_error(dot);
        c.expect(e.empty(), p.string() + ": " + e);
        dots += dot;
        fs::remove(p);
      }
      c.expect(!dots.empty(), "no DOT written");
      if (round == 0) first = dots;
      else c.expect(first == dots, "DOT differs between runs");
    }
  }
  std::ostringstream out, err;
  cli::run({"--lts", kHospitalServer, kSatelliteControl}, out, err);
  for (const char* f : {"tmp/lts_t1.dot", "tmp/lts_t2.dot"}) {
    const std::string e = dot_error(slurp(f));
    c.expect(e.empty(), std::string(f) + ": " + e);
  }

  fs::current_path(old);
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"hospital sync positive", hospital_sync},
      {"hospital sync negative", hospital_sync_negative},
      {"hospital async positive", hospital_async},
      {"satellite async negative", satellite_async},
      {"satellite fair positive", satellite_fair},
      {"duality closure", duality},
      {"unit values", unit_values},
      {"property suite", properties},
      {"oracle cross-validation", oracle_agreement},
      {"output contracts", output_contracts},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.why = std::string("exception: ") + e.what();
    }
    std::cout << (c.why.empty() ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
    if (!c.why.empty()) std::cout << ": " << c.why;
    std::cout << "\n";
    failed += !c.why.empty();
  }
  return failed == 0 ? 0 : 1;
}
