// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: iprox_acceptance <path to iprox executable> <scratch dir>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iprox/verify.hpp"

using namespace iprox;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<CheckRecord> run_ids(const std::function<bool(const std::string&)>& pick) {
  std::vector<CheckRecord> out;
  for (const CheckEntry& e : registry()) {
    if (!pick(e.id)) continue;
    CheckRecord r = e.run(CheckContext{});
    r.id = e.id;
    r.property = e.property;
    out.push_back(std::move(r));
  }
  return out;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

// All records pass (skips allowed only when `allow_skip`); detail lists failures.
Outcome all_pass(const std::vector<CheckRecord>& rs, bool allow_skip = false) {
  Outcome o{true, ""};
  int pass = 0, skip = 0;
  for (const CheckRecord& r : rs) {
    if (r.status == CheckStatus::pass) {
      ++pass;
    } else if (r.status == CheckStatus::skipped && allow_skip) {
      ++skip;
    } else {
      o.pass = false;
      o.detail += " " + r.id + "=" + std::string(to_string(r.status)) +
                  (r.note.empty() ? "" : "(" + r.note + ")");
    }
  }
  if (rs.empty()) {
    o.pass = false;
    o.detail += " no records";
  }
  o.detail = std::to_string(pass) + " pass, " + std::to_string(skip) + " skipped" + o.detail;
  return o;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return out;
}

int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

Outcome determinism(const std::string& exe, const fs::path& root) {
  const fs::path cfg_dir = root / "configs";
  fs::create_directories(cfg_dir);
  std::ofstream(cfg_dir / "fb_f.ini") << "[penalty]\nkind = l1\n[approx]\nkind = f\neps = 0.01\n"
                                         "samples = 5000\npilot_samples = 250\nseed = 11\n"
                                         "[algorithm]\nkind = fb\niterations = 40\n"
                                         "[output]\nplot = trace.svg\n";
  std::ofstream(cfg_dir / "dr_e.ini") << "[penalty]\nkind = l2\n[approx]\nkind = e\neps = 0.05\n"
                                         "policy = boundary\ndirection = per_point\nseed = 3\n"
                                         "[algorithm]\nkind = dr\norder = f_first\n"
                                         "[schedule]\nkind = geometric\nratio = 0.9\n";
  const std::vector<std::string> commands = {
      "run --config " + (cfg_dir / "fb_f.ini").string(),
      "run --config " + (cfg_dir / "dr_e.ini").string(),
      "verify --filter appendix --seed 5",
      "verify --filter table1.l2 --seed 5 --jobs 2",
      "bounds a 0.1",
      "bounds f 0.01 --N 1 --lambda 0.5 --rho 0",
      "surface",
      "fixedpoint l2:d --eps 0.5 --gamma 1",
  };
  Outcome o{true, ""};
  int idx = 0;
  for (const std::string& c : commands) {
    std::map<std::string, std::string> seen[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / ("cmd" + std::to_string(idx)) / ("rep" + std::to_string(rep));
      fs::remove_all(dir);
      fs::create_directories(dir);
      const std::string line = "\"" + exe + "\" --out-dir \"" + dir.string() + "\" " + c +
                               " > \"" + (dir / "stdout.txt").string() + "\" 2>&1";
      const int rc = shell(line);
      if (rc != 0) {
        o.pass = false;
        o.detail += " [" + c + "] exit " + std::to_string(rc);
      }
      seen[rep] = snapshot(dir);
    }
    if (seen[0] != seen[1]) {
      o.pass = false;
      o.detail += " [" + c + "] outputs differ";
    }
    if (seen[0].size() < 2 && starts_with(c, "run")) {
      o.pass = false;
      o.detail += " [" + c + "] missing outputs";
    }
    ++idx;
  }
  o.detail = std::to_string(commands.size()) + " commands run twice" + o.detail;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: iprox_acceptance <iprox executable> <scratch dir>\n";
    return 2;
  }
  const std::string exe = argv[1];
  const fs::path scratch = argv[2];
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "approximation bound suite", 60.0,
       [] {
         const auto rs = run_ids([](const std::string& id) { return starts_with(id, "table1."); });
         Outcome o = all_pass(rs);
         std::map<std::string, std::set<std::string>> per_kind;
         for (const CheckRecord& r : rs) {
           const auto dot = r.id.rfind('.');
           per_kind[r.id.substr(dot + 1)].insert(r.id.substr(7, dot - 7));
         }
         for (const char* k : {"a", "b", "c", "d", "e", "f"}) {
           if (per_kind[k].size() < 3) {
             o.pass = false;
             o.detail += std::string(" kind ") + k + " has < 3 penalties";
           }
         }
         return o;
       }},
      {2, "analytic fixed-point sets", 10.0,
       [] {
         const auto rs = run_ids([](const std::string& id) { return starts_with(id, "appendix."); });
         Outcome o = all_pass(rs);
         if (rs.size() != 6) {
           o.pass = false;
           o.detail += " expected 6 examples";
         }
         return o;
       }},
      {3, "prox-scaling transfer identity", 5.0,
       [] {
         std::vector<CheckRecord> rs;
         for (const Penalty& p : {Penalty::l1(2, 1.0), Penalty::l2(2, 1.5), Penalty::sq_l2(2, 2.0)})
           rs.push_back(check_prox_transfer(p, 100, 0));
         return all_pass(rs);
       }},
      {4, "lower-bound demonstrations", 5.0,
       [] {
         return all_pass(run_ids([](const std::string& id) {
           return id == "lower_bound.quadratic" || id == "lower_bound.landau_kolmogorov";
         }));
       }},
      {5, "Gaussian-softmin estimator", 30.0,
       [] {
         auto pick = [](const std::string& id) { return id == "hj.softmin_oracle"; };
         const auto a = run_ids(pick);
         const auto b = run_ids(pick);
         Outcome o = all_pass(a);
         if (a.size() != 1 || a[0].to_json().dump() != b[0].to_json().dump()) {
           o.pass = false;
           o.detail += " rerun differs";
         }
         return o;
       }},
      {6, "convergence-ball experiments", 120.0,
       [] {
         const auto rs = run_ids([](const std::string& id) {
           return starts_with(id, "ball.") || starts_with(id, "vanish.");
         });
         // Skips are the cells whose composite factor is not < 1.
         Outcome o = all_pass(rs, true);
         for (const CheckRecord& r : rs) {
           if (r.status == CheckStatus::skipped && r.note.find("composite factor") == std::string::npos) {
             o.pass = false;
             o.detail += " unexpected skip " + r.id;
           }
         }
         return o;
       }},
      {7, "contractivity surface", 5.0,
       [] { return all_pass(run_ids([](const std::string& id) { return id == "surface.contractivity"; })); }},
      {8, "eps-subdifferential oracles", 30.0,
       [] {
         return all_pass(run_ids([](const std::string& id) {
           return id == "subdiff.sq_l2" || id == "subdiff.l1" || id == "subdiff.l2";
         }));
       }},
      {9, "byte-identical reruns", 120.0, [&] { return determinism(exe, scratch); }},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += " over time budget";
    }
    all = all && o.pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", secs, c.budget_s);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ") ["
              << timing << "] " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
