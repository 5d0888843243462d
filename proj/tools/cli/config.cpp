#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "iprox/errors.hpp"
#include "iprox/format.hpp"

namespace iprox::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return std::string(s);
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int to_int(std::string_view s) {
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::vector<double> to_doubles(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(to_double(trim(s.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

void positive(double v) {
  if (!(v > 0)) throw ConstraintError("must be > 0, got " + fmt17(v));
}

void nonnegative(double v) {
  if (!(v >= 0)) throw ConstraintError("must be >= 0, got " + fmt17(v));
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using SectionTable = std::map<std::string, Setter, std::less<>>;

const std::map<std::string, SectionTable, std::less<>>& grammar() {
  static const std::map<std::string, SectionTable, std::less<>> g = {
      {"penalty",
       {
           {"kind", [](RunConfig& c, const std::string& v) { c.penalty.kind = penalty_kind_from_string(v); }},
           {"dim", [](RunConfig& c, const std::string& v) {
              c.penalty.dim = to_int<int>(v);
              if (c.penalty.dim < 1) throw ConstraintError("must be >= 1");
            }},
           {"gamma", [](RunConfig& c, const std::string& v) { c.penalty.gamma = to_double(v); }},
           {"b", [](RunConfig& c, const std::string& v) {
              c.penalty.b = to_double(v);
              positive(c.penalty.b);
            }},
           {"q", [](RunConfig& c, const std::string& v) {
              c.penalty.q = to_doubles(v);
              for (double x : c.penalty.q) positive(x);
            }},
           {"shift", [](RunConfig& c, const std::string& v) { c.penalty.shift = to_double(v); }},
       }},
      {"approx",
       {
           {"kind", [](RunConfig& c, const std::string& v) { c.approx.kind = approx_kind_from_string(v); }},
           {"eps", [](RunConfig& c, const std::string& v) {
              c.approx.eps = to_double(v);
              nonnegative(c.approx.eps);
            }},
           {"policy", [](RunConfig& c, const std::string& v) {
              if (v != "default") policy_kind_from_string(v);
              c.approx.policy = v;
            }},
           {"direction", [](RunConfig& c, const std::string& v) {
              if (v != "seeded" && v != "per_point" && v != "radial")
                throw std::invalid_argument("unknown direction mode '" + v + "'");
              c.approx.direction = v;
            }},
           {"seed", [](RunConfig& c, const std::string& v) { c.approx.seed = to_int<std::uint64_t>(v); }},
           {"samples", [](RunConfig& c, const std::string& v) {
              c.approx.samples = to_int<long>(v);
              positive(static_cast<double>(c.approx.samples));
            }},
           {"pilot_samples", [](RunConfig& c, const std::string& v) {
              c.approx.pilot_samples = to_int<long>(v);
              nonnegative(static_cast<double>(c.approx.pilot_samples));
            }},
           {"box", [](RunConfig& c, const std::string& v) {
              c.approx.box = to_double(v);
              positive(c.approx.box);
            }},
       }},
      {"algorithm",
       {
           {"kind", [](RunConfig& c, const std::string& v) { c.algorithm.kind = algorithm_from_string(v); }},
           {"tau", [](RunConfig& c, const std::string& v) {
              if (v == "optimal") {
                c.algorithm.tau.reset();
                return;
              }
              const double t = to_double(v);
              positive(t);
              c.algorithm.tau = t;
            }},
           {"order", [](RunConfig& c, const std::string& v) { c.algorithm.order = order_from_string(v); }},
           {"lambda", [](RunConfig& c, const std::string& v) {
              c.algorithm.lambda = to_double(v);
              positive(c.algorithm.lambda);
            }},
           {"mu", [](RunConfig& c, const std::string& v) {
              c.algorithm.mu = to_double(v);
              positive(c.algorithm.mu);
            }},
           {"L_f", [](RunConfig& c, const std::string& v) {
              c.algorithm.L_f = to_double(v);
              positive(c.algorithm.L_f);
            }},
           {"center", [](RunConfig& c, const std::string& v) { c.algorithm.center = to_doubles(v); }},
           {"x0", [](RunConfig& c, const std::string& v) { c.algorithm.x0 = to_doubles(v); }},
           {"iterations", [](RunConfig& c, const std::string& v) {
              c.algorithm.iterations = to_int<int>(v);
              nonnegative(c.algorithm.iterations);
            }},
       }},
      {"schedule",
       {
           {"kind", [](RunConfig& c, const std::string& v) { c.schedule.kind = schedule_kind_from_string(v); }},
           {"eps0", [](RunConfig& c, const std::string& v) {
              c.schedule.eps0 = to_double(v);
              nonnegative(*c.schedule.eps0);
            }},
           {"gamma0", [](RunConfig& c, const std::string& v) {
              c.schedule.gamma0 = to_double(v);
              nonnegative(c.schedule.gamma0);
            }},
           {"ratio", [](RunConfig& c, const std::string& v) {
              c.schedule.ratio = to_double(v);
              if (!(c.schedule.ratio > 0 && c.schedule.ratio < 1))
                throw ConstraintError("must lie in (0, 1)");
            }},
           {"power", [](RunConfig& c, const std::string& v) {
              c.schedule.power = to_double(v);
              positive(c.schedule.power);
            }},
       }},
      {"output",
       {
           {"trace", [](RunConfig& c, const std::string& v) { c.output.trace = v; }},
           {"manifest", [](RunConfig& c, const std::string& v) { c.output.manifest = v; }},
           {"plot", [](RunConfig& c, const std::string& v) { c.output.plot = v; }},
           {"log_scale", [](RunConfig& c, const std::string& v) {
              if (v != "true" && v != "false")
                throw std::invalid_argument("expected true or false, got '" + v + "'");
              c.output.log_scale = v == "true";
            }},
       }},
  };
  return g;
}

std::string upper(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

// Where each key was last set, for cross-field diagnostics.
using Origins = std::map<std::string, std::string>;

void set_key(RunConfig& c, Origins& origins, const std::string& section, const std::string& key,
             const std::string& value, const std::string& where) {
  const auto& g = grammar();
  const auto sec = g.find(section);
  const auto it = sec->second.find(key);
  if (it == sec->second.end())
    throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
  try {
    it->second(c, value);
  } catch (const std::exception& e) {
    throw ConfigError(where + ": key '" + key + "': " + e.what());
  }
  origins[section + "." + key] = where;
}

void cross_validate(const RunConfig& c, const Origins& origins) {
  auto where = [&](const std::string& k) {
    const auto it = origins.find(k);
    return it == origins.end() ? std::string("default") : it->second;
  };
  auto fail = [&](const std::string& k, const std::string& msg) {
    throw ConfigError(where(k) + ": key '" + k.substr(k.find('.') + 1) + "': " + msg);
  };
  const int n = c.penalty.kind == PenaltyKind::aniso_quad ? static_cast<int>(c.penalty.q.size())
                                                          : c.penalty.dim;
  if (c.penalty.kind == PenaltyKind::aniso_quad && c.penalty.q.empty())
    fail("penalty.q", "aniso_quad needs a diagonal q");
  if (c.penalty.kind != PenaltyKind::constant && !(c.penalty.gamma > 0))
    fail("penalty.gamma", "must be > 0");
  if (static_cast<int>(c.algorithm.x0.size()) != n)
    fail("algorithm.x0", "has " + std::to_string(c.algorithm.x0.size()) +
                             " entries, penalty dimension is " + std::to_string(n));
  if (c.algorithm.kind != Algorithm::ppa && static_cast<int>(c.algorithm.center.size()) != n)
    fail("algorithm.center", "has " + std::to_string(c.algorithm.center.size()) +
                                 " entries, penalty dimension is " + std::to_string(n));
  if (c.algorithm.L_f < c.algorithm.mu) fail("algorithm.L_f", "must be >= mu");
  if (c.approx.policy == "fixed") fail("approx.policy", "fixed vectors are not configurable");
  try {
    c.make_policy();
    make_approx(c.approx.kind, c.make_penalty(), c.prox_lambda(), c.approx.eps, c.make_policy(),
                c.approx.seed);
    c.make_schedule().validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

Penalty RunConfig::make_penalty() const {
  Penalty p;
  switch (penalty.kind) {
    case PenaltyKind::sq_l2: p = Penalty::sq_l2(penalty.dim, penalty.gamma); break;
    case PenaltyKind::l2: p = Penalty::l2(penalty.dim, penalty.gamma); break;
    case PenaltyKind::l1: p = Penalty::l1(penalty.dim, penalty.gamma); break;
    case PenaltyKind::aniso_quad:
      p = Penalty::aniso_quad(Eigen::Map<const Vec>(penalty.q.data(),
                                                   static_cast<Eigen::Index>(penalty.q.size())));
      break;
    case PenaltyKind::constant: p = Penalty::constant(penalty.dim, penalty.gamma); break;
    case PenaltyKind::mcp: p = Penalty::mcp(penalty.dim, penalty.gamma, penalty.b); break;
  }
  return penalty.shift != 0.0 ? p.with_quadratic(penalty.shift) : p;
}

Policy RunConfig::make_policy() const {
  PolicyKind k;
  if (approx.policy == "default") {
    switch (approx.kind) {
      case ApproxKind::d: k = PolicyKind::gaussian_bump; break;
      case ApproxKind::f: k = PolicyKind::monte_carlo; break;
      default: k = PolicyKind::adversarial; break;
    }
  } else {
    k = policy_kind_from_string(approx.policy);
  }
  Policy p;
  switch (k) {
    case PolicyKind::exact: p = Policy::exact(); break;
    case PolicyKind::random_sphere: p = Policy::random_sphere(); break;
    case PolicyKind::adversarial: p = Policy::adversarial(); break;
    case PolicyKind::center: p = Policy::center(); break;
    case PolicyKind::steiner: p = Policy::steiner(); break;
    case PolicyKind::gaussian_bump: p = Policy::gaussian_bump(); break;
    case PolicyKind::shrink: p = Policy::shrink(); break;
    case PolicyKind::monte_carlo: p = Policy::monte_carlo(approx.samples, approx.pilot_samples); break;
    case PolicyKind::boundary: {
      const DirectionMode m = approx.direction == "per_point" ? DirectionMode::per_point
                              : approx.direction == "radial" ? DirectionMode::radial
                                                             : DirectionMode::seeded;
      p = Policy::boundary(m);
      break;
    }
    case PolicyKind::fixed:
      throw ConstraintError("fixed vectors are not configurable");
  }
  p.box = approx.box;
  return p;
}

Schedule RunConfig::make_schedule() const {
  const double e0 = schedule.eps0.value_or(approx.eps);
  switch (schedule.kind) {
    case ScheduleKind::geometric: return Schedule::geometric(e0, schedule.ratio, schedule.gamma0);
    case ScheduleKind::power: return Schedule::power_law(e0, schedule.power, schedule.gamma0);
    case ScheduleKind::constant: break;
  }
  return Schedule::constant(e0, schedule.gamma0);
}

SmoothTerm RunConfig::make_smooth_term() const {
  Vec c = algorithm.kind == Algorithm::ppa
              ? Vec(Vec::Zero(static_cast<Eigen::Index>(algorithm.x0.size())))
              : Vec(Eigen::Map<const Vec>(algorithm.center.data(),
                                          static_cast<Eigen::Index>(algorithm.center.size())));
  return SmoothTerm::diagonal_quadratic(algorithm.mu, algorithm.L_f, c);
}

double RunConfig::step() const {
  if (algorithm.kind == Algorithm::ppa) return algorithm.lambda;
  return algorithm.tau.value_or(optimal_tau(algorithm.kind, algorithm.mu, algorithm.L_f));
}

double RunConfig::prox_lambda() const { return step(); }

Vec RunConfig::start() const {
  return Eigen::Map<const Vec>(algorithm.x0.data(), static_cast<Eigen::Index>(algorithm.x0.size()));
}

RunConfig parse_config(std::string_view text, bool apply_env) {
  RunConfig c;
  Origins origins;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    std::string_view line(raw);
    const auto hash = line.find_first_of("#;");
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!grammar().count(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside a section");
    set_key(c, origins, section, key, unquote(trim(line.substr(eq + 1))), where);
  }
  if (apply_env) {
    for (const auto& [sec, table] : grammar()) {
      for (const auto& [key, setter] : table) {
        const std::string var = std::string(kEnvPrefix) + upper(sec) + "_" + upper(key);
        if (const char* v = std::getenv(var.c_str())) set_key(c, origins, sec, key, unquote(trim(v)), "env " + var);
      }
    }
  }
  cross_validate(c, origins);
  return c;
}

RunConfig load_config(const std::string& path, bool apply_env) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), apply_env);
}

namespace {

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt17(v[i]);
  return s;
}

}  // namespace

std::string to_text(const RunConfig& c) {
  std::ostringstream o;
  o << "[penalty]\n"
    << "kind = " << to_string(c.penalty.kind) << "\n"
    << "dim = " << c.penalty.dim << "\n"
    << "gamma = " << fmt17(c.penalty.gamma) << "\n"
    << "b = " << fmt17(c.penalty.b) << "\n";
  if (!c.penalty.q.empty()) o << "q = " << join(c.penalty.q) << "\n";
  o << "shift = " << fmt17(c.penalty.shift) << "\n\n"
    << "[approx]\n"
    << "kind = " << to_string(c.approx.kind) << "\n"
    << "eps = " << fmt17(c.approx.eps) << "\n"
    << "policy = " << c.approx.policy << "\n"
    << "direction = " << c.approx.direction << "\n"
    << "seed = " << c.approx.seed << "\n"
    << "samples = " << c.approx.samples << "\n"
    << "pilot_samples = " << c.approx.pilot_samples << "\n"
    << "box = " << fmt17(c.approx.box) << "\n\n"
    << "[algorithm]\n"
    << "kind = " << to_string(c.algorithm.kind) << "\n"
    << "tau = " << (c.algorithm.tau ? fmt17(*c.algorithm.tau) : std::string("optimal")) << "\n"
    << "order = " << to_string(c.algorithm.order) << "\n"
    << "lambda = " << fmt17(c.algorithm.lambda) << "\n"
    << "mu = " << fmt17(c.algorithm.mu) << "\n"
    << "L_f = " << fmt17(c.algorithm.L_f) << "\n"
    << "center = " << join(c.algorithm.center) << "\n"
    << "x0 = " << join(c.algorithm.x0) << "\n"
    << "iterations = " << c.algorithm.iterations << "\n\n"
    << "[schedule]\n"
    << "kind = " << to_string(c.schedule.kind) << "\n";
  if (c.schedule.eps0) o << "eps0 = " << fmt17(*c.schedule.eps0) << "\n";
  o << "gamma0 = " << fmt17(c.schedule.gamma0) << "\n"
    << "ratio = " << fmt17(c.schedule.ratio) << "\n"
    << "power = " << fmt17(c.schedule.power) << "\n\n"
    << "[output]\n"
    << "trace = " << c.output.trace << "\n"
    << "manifest = " << c.output.manifest << "\n";
  if (!c.output.plot.empty()) o << "plot = " << c.output.plot << "\n";
  o << "log_scale = " << (c.output.log_scale ? "true" : "false") << "\n";
  return o.str();
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["penalty"] = {{"kind", to_string(c.penalty.kind)}, {"dim", c.penalty.dim},
                  {"gamma", c.penalty.gamma},          {"b", c.penalty.b},
                  {"q", c.penalty.q},                  {"shift", c.penalty.shift}};
  j["approx"] = {{"kind", to_string(c.approx.kind)},
                 {"eps", c.approx.eps},
                 {"policy", c.approx.policy},
                 {"direction", c.approx.direction},
                 {"seed", c.approx.seed},
                 {"samples", c.approx.samples},
                 {"pilot_samples", c.approx.pilot_samples},
                 {"box", c.approx.box}};
  j["algorithm"] = {{"kind", to_string(c.algorithm.kind)},
                    {"tau", c.step()},
                    {"tau_policy", c.algorithm.tau ? "fixed" : "optimal"},
                    {"order", to_string(c.algorithm.order)},
                    {"lambda", c.algorithm.lambda},
                    {"mu", c.algorithm.mu},
                    {"L_f", c.algorithm.L_f},
                    {"center", c.algorithm.center},
                    {"x0", c.algorithm.x0},
                    {"iterations", c.algorithm.iterations}};
  j["schedule"] = {{"kind", to_string(c.schedule.kind)},
                   {"eps0", c.schedule.eps0.value_or(c.approx.eps)},
                   {"gamma0", c.schedule.gamma0},
                   {"ratio", c.schedule.ratio},
                   {"power", c.schedule.power}};
  j["output"] = {{"trace", c.output.trace},
                 {"manifest", c.output.manifest},
                 {"plot", c.output.plot},
                 {"log_scale", c.output.log_scale}};
  return j;
}

}  // namespace iprox::cli
