#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sessub/async_checker.hpp"
#include "sessub/fair_checker.hpp"
#include "sessub/lts.hpp"
#include "sessub/oracle.hpp"
#include "sessub/simgraph.hpp"
#include "sessub/sync_checker.hpp"
#include "sessub/types.hpp"

namespace sessub::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kParseFailure = 2;
constexpr int kUncontrollable = 3;

struct Settings {
  bool sync = false;
  bool async = false;
  bool fair = false;
  bool all = false;
  bool gayhole = false;
  bool kozen = false;
  bool nofallback = false;
  bool pics = false;
  bool lts = false;
  bool dual = false;
  std::string out = "tmp/simulation_tree.dot";
  std::string oracle;
  std::size_t bound = 4;
  std::size_t depth = 60;
  std::string t1;
  std::string t2;
  std::optional<std::size_t> steps;
};

// An argument naming an existing file is read from disk, anything else is
// taken as the type text itself.
std::string load(const std::string& arg) {
  std::error_code ec;
  if (!fs::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string verdict_line(const std::string& alg, const CheckResult& r) {
  const auto ms = static_cast<long long>(std::llround(r.graph.meta.elapsed_ms));
  return alg + ": " + to_string(r.verdict) + " (" + std::to_string(ms) + " ms)";
}

fs::path dot_path(const Settings& s, const std::string& alg, bool several) {
  fs::path p = s.out;
  if (!several) return p;
  return p.parent_path() / (p.stem().string() + "_" + alg + p.extension().string());
}

int run_oracle(const Settings& s, const SessionType& t1, const SessionType& t2, std::ostream& out,
               std::ostream& err) {
  OracleOptions opts;
  if (s.oracle == "rendezvous") {
    opts.mode = OracleMode::Rendezvous;
  } else if (s.oracle == "fifo") {
    opts.mode = OracleMode::Fifo;
  } else if (s.oracle == "fair") {
    opts.mode = OracleMode::Fair;
  } else {
    err << "unknown oracle mode '" << s.oracle << "' (expected rendezvous, fifo or fair)\n";
    return kParseFailure;
  }
  opts.bound = std::max<std::size_t>(s.bound, 1);
  opts.depth = std::max<std::size_t>(s.depth, 1);
  const OracleResult r = explore(build_lts(t1), build_lts(dual(t2)), opts);
  out << "oracle (" << s.oracle << "): ";
  if (r.violation) {
    out << to_string(r.violation->kind) << " after [" << to_string(r.violation->trace) << "]";
  } else {
    out << "no violation";
  }
  out << " (" << r.configurations << " configurations";
  if (r.truncated) out << ", depth limited";
  if (r.queue_limited) out << ", queue limited";
  if (r.inconclusive > 0) out << ", " << r.inconclusive << " inconclusive";
  out << ")\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Session subtyping checker", "checker"};
  app.add_flag("--sync", s.sync, "Synchronous subtyping (default)");
  app.add_flag("--async", s.async, "Asynchronous subtyping");
  app.add_flag("--fair", s.fair, "Fair asynchronous subtyping");
  app.add_flag("--all", s.all, "Run all three checks");
  app.add_flag("--gayhole", s.gayhole, "Tree-shaped synchronous game (default)");
  app.add_flag("--kozen", s.kozen, "Memoised synchronous game");
  app.add_flag("--nofallback", s.nofallback, "No retry on the dual problem after maybe");
  app.add_flag("--pics,--debug", s.pics, "Write the simulation graph as DOT");
  app.add_option("--out", s.out, "DOT output path")->capture_default_str();
  app.add_flag("--lts", s.lts, "Write tmp/lts_t1.dot and tmp/lts_t2.dot instead of checking");
  app.add_flag("--dual", s.dual, "Print the dual problem instead of checking");
  app.add_option("--oracle", s.oracle, "Run the bounded execution oracle (rendezvous, fifo, fair)");
  app.add_option("--bound", s.bound, "Oracle queue bound")->capture_default_str();
  app.add_option("--depth", s.depth, "Oracle depth")->capture_default_str();
  app.add_option("t1", s.t1, "Candidate subtype (file or inline text)")->required();
  app.add_option("t2", s.t2, "Candidate supertype (file or inline text)")->required();
  app.add_option("steps", s.steps, "Step budget for the asynchronous checks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kParseFailure;
  }
  if (s.gayhole && s.kozen) {
    err << "--gayhole and --kozen are exclusive\n";
    return kParseFailure;
  }
  if (s.steps && *s.steps == 0) {
    err << "steps must be positive\n";
    return kParseFailure;
  }

  SessionType t1;
  SessionType t2;
  for (auto [arg, dest, name] : {std::tuple{&s.t1, &t1, "t1"}, std::tuple{&s.t2, &t2, "t2"}}) {
    try {
      *dest = parse(load(*arg));
    } catch (const ParseError& e) {
      err << name << ": " << to_string(e.kind()) << " at line " << e.line() << ", column " << e.column()
          << ": " << e.what() << "\n";
      return kParseFailure;
    }
  }

  try {
    if (s.dual) {
      out << render(dual(t2)) << "\n" << render(dual(t1)) << "\n";
      return 0;
    }
    if (s.lts) {
      write_file("tmp/lts_t1.dot", lts_to_dot(build_lts(t1), "t1"));
      write_file("tmp/lts_t2.dot", lts_to_dot(build_lts(t2), "t2"));
      return 0;
    }
    if (!s.oracle.empty()) return run_oracle(s, t1, t2, out, err);

    const Lts sub = build_lts(t1);
    const Lts sup = build_lts(t2);
    std::vector<std::string> algs;
    if (s.all) {
      algs = {"sync", "async", "fair"};
    } else {
      if (s.sync) algs.push_back("sync");
      if (s.async) algs.push_back("async");
      if (s.fair) algs.push_back("fair");
      if (algs.empty()) algs.push_back("sync");
    }
    const bool several = algs.size() > 1;

    for (const auto& alg : algs) {
      CheckResult r;
      if (alg == "sync") {
        r = check_sync(sub, sup, s.kozen ? SyncMode::Memo : SyncMode::Tree);
      } else if (alg == "async") {
        AsyncOptions o;
        o.fallback = !s.nofallback;
        if (s.steps) o.max_steps = *s.steps;
        r = check_async(sub, sup, o);
      } else {
        FairOptions o;
        if (s.steps) o.max_steps = *s.steps;
        try {
          r = check_fair(sub, sup, o);
        } catch (const Uncontrollable& e) {
          err << "fair: " << e.what() << "\n";
          if (!s.all) return kUncontrollable;
          continue;
        }
      }
      out << verdict_line(alg, r) << "\n";
      if (s.pics) write_file(dot_path(s, alg, several), sim_to_dot(r.graph));
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sessub::cli
