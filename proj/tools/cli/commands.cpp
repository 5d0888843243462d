#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "iprox/errors.hpp"
#include "iprox/format.hpp"
#include "iprox/verify.hpp"

#ifndef IPROX_VERSION
#define IPROX_VERSION "unknown"
#endif

namespace iprox::cli {

namespace fs = std::filesystem;

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

namespace {

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string vec_text(const Vec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt17(v[i]);
  return s + ")";
}

// Shortest representation that round-trips.
std::string short_num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trace_svg(const Trace& t, bool log_scale) {
  const double W = 800, H = 600, left = 70, right = 20, top = 30, bottom = 50;
  const auto y_of = [&](double v) { return log_scale ? std::log10(std::max(v, 1e-300)) : v; };
  double lo = 1e300, hi = -1e300;
  for (const auto* series : {&t.dist, &t.envelope}) {
    for (double v : *series) {
      lo = std::min(lo, y_of(v));
      hi = std::max(hi, y_of(v));
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double n = std::max<double>(1.0, static_cast<double>(t.dist.size()) - 1.0);
  auto px = [&](std::size_t k) { return left + (W - left - right) * static_cast<double>(k) / n; };
  auto py = [&](double v) { return top + (H - top - bottom) * (hi - y_of(v)) / (hi - lo); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
    << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
    << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right
    << "\" height=\"" << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  const char* colors[] = {"#1f77b4", "#d62728"};
  const char* names[] = {"dist", "envelope"};
  int idx = 0;
  for (const auto* series : {&t.dist, &t.envelope}) {
    o << "<polyline fill=\"none\" stroke=\"" << colors[idx] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series->size(); ++k)
      o << (k ? " " : "") << short_num(px(k)) << "," << short_num(py((*series)[k]));
    o << "\"/>\n";
    o << "<text x=\"" << W - right - 120 << "\" y=\"" << top + 20 + 18 * idx << "\" fill=\""
      << colors[idx] << "\" font-size=\"14\">" << names[idx] << "</text>\n";
    ++idx;
  }
  o << "<text x=\"" << left << "\" y=\"" << H - 15 << "\" font-size=\"14\">k (0.."
    << t.dist.size() - 1 << ")</text>\n"
    << "<text x=\"5\" y=\"" << top + 5 << "\" font-size=\"12\">"
    << (log_scale ? "1e" + short_num(hi) : short_num(hi)) << "</text>\n"
    << "<text x=\"5\" y=\"" << H - bottom << "\" font-size=\"12\">"
    << (log_scale ? "1e" + short_num(lo) : short_num(lo)) << "</text>\n"
    << "</svg>\n";
  return o.str();
}

}  // namespace

std::string trace_csv(const Trace& t) {
  std::ostringstream o;
  const Eigen::Index n = t.iterates.empty() ? 0 : t.iterates.front().size();
  o << "k";
  for (Eigen::Index i = 0; i < n; ++i) o << ",x" << i;
  o << ",dist,envelope,residual,eps,mc_slack\n";
  for (std::size_t k = 0; k < t.iterates.size(); ++k) {
    o << k;
    for (Eigen::Index i = 0; i < n; ++i) o << "," << fmt17(t.iterates[k][i]);
    o << "," << (k < t.dist.size() ? fmt17(t.dist[k]) : "");
    o << "," << (k < t.envelope.size() ? fmt17(t.envelope[k]) : "");
    // Step quantities belong to the step that produced x_k.
    const bool step = k > 0;
    o << "," << (step ? fmt17(t.residual[k - 1]) : "");
    o << "," << (step ? fmt17(t.eps[k - 1]) : "");
    o << "," << (step ? fmt17(t.mc_slack[k - 1]) : "");
    o << "\n";
  }
  return o.str();
}

int cmd_run(const RunConfig& cfg, const std::string& out_dir, std::ostream& out, int jobs) {
  const Penalty p = cfg.make_penalty();
  const double lambda = cfg.prox_lambda();
  Policy policy = cfg.make_policy();
  policy.jobs = jobs;
  const Schedule schedule = cfg.make_schedule();
  SplittingProblem prob;
  prob.algorithm = cfg.algorithm.kind;
  prob.order = cfg.algorithm.order;
  prob.f = cfg.make_smooth_term();
  prob.tau = cfg.step();
  const ApproxFactory make_g = [&](double eps) {
    return make_approx(cfg.approx.kind, p, lambda, eps, policy, cfg.approx.seed);
  };
  const ApproxOperator g0 = make_g(schedule.eps(0));
  const LipschitzPair lp = g0.lipschitz();
  const double L = composite_factor(prob, lp.L);
  const double L_R = reflected_resolvent_factor(prob.f.mu, prob.f.L_f, prob.tau);
  const ProxConstants pc = prox_constants(p, lambda);

  nlohmann::json manifest;
  manifest["tool"] = "iprox";
  manifest["version"] = IPROX_VERSION;
  manifest["config"] = to_json(cfg);
  nlohmann::json constants = {{"L_psi", pc.L_psi},
                              {"rho", p.rho()},
                              {"lambda", lambda},
                              {"sigma", g0.sigma()},
                              {"L_g", lp.L},
                              {"gamma_g", lp.gamma},
                              {"L_composite", L},
                              {"L_R", L_R},
                              {"multiplier", error_multiplier(prob.algorithm, prob.order, L_R)}};
  const double gamma = std::max(lp.gamma, schedule.gamma(0));
  constants["ball_radius"] =
      L < 1.0 ? nlohmann::json(ball_radius(prob.algorithm, prob.order, L, gamma, g0.sigma(), L_R))
              : nlohmann::json(nullptr);
  manifest["constants"] = constants;

  std::optional<Vec> target;
  try {
    target = reference_fixed_point(prob, p, lambda, cfg.start());
    manifest["target"] = std::vector<double>(target->data(), target->data() + target->size());
  } catch (const std::exception& e) {
    manifest["target"] = nullptr;
    manifest["target_note"] = e.what();
  }

  const Trace t = run_splitting(prob, make_g, schedule, cfg.start(), cfg.algorithm.iterations, target);
  nlohmann::json summary = {{"iterations", cfg.algorithm.iterations}};
  const Vec& last = t.iterates.back();
  summary["final_iterate"] = std::vector<double>(last.data(), last.data() + last.size());
  if (target) {
    summary["final_dist"] = t.dist.back();
    summary["window_max_dist"] = t.window_max_dist(0.2);
  }
  manifest["summary"] = summary;
  manifest["outputs"] = {{"trace", cfg.output.trace}};
  if (!cfg.output.plot.empty()) manifest["outputs"]["plot"] = cfg.output.plot;

  write_atomic(in_dir(out_dir, cfg.output.trace), trace_csv(t));
  if (!cfg.output.plot.empty() && target)
    write_atomic(in_dir(out_dir, cfg.output.plot), trace_svg(t, cfg.output.log_scale));
  write_atomic(in_dir(out_dir, cfg.output.manifest), manifest.dump(2) + "\n");

  out << "algorithm=" << to_string(prob.algorithm) << " kind=" << to_string(cfg.approx.kind)
      << " K=" << cfg.algorithm.iterations << " L_composite=" << fmt17(L);
  if (target) {
    out << " final_dist=" << fmt17(t.dist.back())
        << " window_max_dist=" << fmt17(t.window_max_dist(0.2));
  }
  if (L < 1.0) out << " ball_radius=" << fmt17(constants["ball_radius"].get<double>());
  out << "\n";
  return 0;
}

int cmd_verify(const std::string& filter, std::uint64_t seed, int jobs, const std::string& report,
               std::ostream& out) {
  const std::vector<CheckRecord> records = run_all(filter, seed, jobs);
  int fails = 0;
  for (const CheckRecord& r : records) {
    std::string tag(to_string(r.status));
    for (char& ch : tag) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out << tag << " " << r.id;
    if (!r.note.empty() && r.status != CheckStatus::pass) out << "  (" << r.note << ")";
    out << "\n";
    if (r.failed()) ++fails;
  }
  const nlohmann::json doc = report_json(records, filter, seed);
  const nlohmann::json& summary = doc["summary"];
  write_atomic(report, doc.dump(2) + "\n");
  out << records.size() << " checks: " << summary["pass"] << " pass, "
      << summary["fail"] << " fail, " << summary["skipped"] << " skipped\n";
  if (records.empty()) out << "no checks match filter '" << filter << "'\n";
  return fails == 0 ? 0 : 1;
}

std::string bounds_line(ApproxKind kind, double eps, const BoundConstants& c) {
  const std::string e = short_num(eps);
  std::string sigma, L, gamma;
  // Missing constants keep the symbolic form of the entry.
  try {
    sigma = short_num(sigma_bound(kind, eps, c));
  } catch (const std::invalid_argument&) {
    switch (kind) {
      case ApproxKind::b: sigma = "L_psi*" + e; break;
      case ApproxKind::c: sigma = "sqrt(" + e + "/(1-lambda*rho))"; break;
      case ApproxKind::d: sigma = "2*sqrt(L_eps*" + e + ")"; break;
      case ApproxKind::e: sigma = "sqrt(2*L_psi*" + e + ")"; break;
      case ApproxKind::f: sigma = "sqrt(N*" + e + "/(1/lambda-rho))"; break;
      case ApproxKind::a: sigma = e; break;
    }
  }
  try {
    const LipschitzPair lp = lipschitz_pair(kind, eps, c);
    L = short_num(lp.L);
    gamma = short_num(lp.gamma);
  } catch (const std::invalid_argument&) {
    switch (kind) {
      case ApproxKind::a:
        L = "L_psi";
        gamma = short_num(2.0 * eps);
        break;
      case ApproxKind::b:
        L = "L_psi";
        gamma = "2*L_psi*" + e;
        break;
      case ApproxKind::c:
        L = "1/(1-lambda*rho)";
        gamma = "sqrt(2*" + e + "/(1-lambda*rho))";
        break;
      case ApproxKind::d:
        L = "L_eps";
        gamma = "0";
        break;
      case ApproxKind::e:
        L = "L_psi";
        gamma = "sqrt(2*L_psi*" + e + ")";
        break;
      case ApproxKind::f:
        L = c.rho && *c.rho > 0 ? "1+tau/lambda" : "L_psi";
        gamma = "0";
        break;
    }
  }
  return "sigma=" + sigma + " L=" + L + " gamma=" + gamma;
}

int cmd_bounds(ApproxKind kind, double eps, const BoundConstants& c, std::ostream& out) {
  out << bounds_line(kind, eps, c) << "\n";
  return 0;
}

int cmd_surface(const SurfaceSpec& spec, const std::string& out_dir, std::ostream& out) {
  const SurfaceGrid grid = contractivity_surface(spec);
  write_atomic(in_dir(out_dir, "surface.csv"), surface_csv(grid));
  out << "wrote surface.csv";
  for (const auto& [a, values] : grid.values) {
    const std::string name = "surface_" + std::string(to_string(a)) + ".svg";
    write_atomic(in_dir(out_dir, name), surface_svg(grid, a));
    const auto convergent = (values.array() < 1.0).count();
    out << "\n" << to_string(a) << ": " << convergent << "/" << values.size()
        << " convergent cells, wrote " << name;
  }
  out << "\n";
  return 0;
}

int cmd_fixedpoint(const std::string& example_id, double eps, double gamma, std::ostream& out) {
  const CheckRecord r = check_appendix_fixed_points(example_id, eps, gamma);
  out << "example=" << example_id << " eps=" << short_num(eps) << " gamma=" << short_num(gamma) << "\n";
  auto show = [&](const char* label, const char* key) {
    out << label;
    if (!r.config.contains(key) || r.config[key].is_null()) {
      out << "empty set\n";
      return;
    }
    const auto v = r.config[key].get<std::vector<double>>();
    out << vec_text(Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
    if (std::string(key) == "analytic" && r.config.contains("ray_direction")) {
      const auto d = r.config["ray_direction"].get<std::vector<double>>();
      out << " + alpha * "
          << vec_text(Eigen::Map<const Vec>(d.data(), static_cast<Eigen::Index>(d.size())))
          << ", alpha >= 0";
    }
    out << "\n";
  };
  if (r.status == CheckStatus::skipped) {
    out << "skipped: " << r.note << "\n";
    return 0;
  }
  show("analytic:  ", "analytic");
  if (r.config.contains("numerical")) {
    show("numerical: ", "numerical");
  } else {
    out << "numerical: no fixed point (solver failed from all 8 starts)\n";
  }
  out << "status: " << to_string(r.status) << "\n";
  return r.failed() ? 1 : 0;
}

}  // namespace iprox::cli
