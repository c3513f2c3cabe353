#include "ptmu/error.hpp"
#include "ptmu/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace ptmu {

namespace {

json provenance_json(const GramProvenance& p) {
  return {{"N", p.N},
          {"angular_nodes", p.angular_nodes},
          {"radial_nodes", p.radial_nodes},
          {"boundary_nodes", p.boundary_nodes},
          {"boundary_dmin", p.boundary_dmin},
          {"truncated_mass", p.truncated_mass},
          {"asymmetry", p.asymmetry},
          {"min_eigenvalue", p.min_eigenvalue},
          {"cantor_atoms", p.cantor_atoms},
          {"max_eval_error", p.max_eval_error}};
}

json complex_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

json curve_json(const DistanceCurve& c) {
  return {{"degrees", c.degrees},
          {"d", c.values},
          {"d_squared", c.squared},
          {"jitter", c.jitter},
          {"iterative", c.iterative},
          {"t", c.t},
          {"coefficients_at_max_degree", c.coefficients.empty() ? json::array() : complex_list(c.coefficients.back())},
          {"provenance", provenance_json(c.provenance)}};
}

json certificate_json(const DualCertificate& c) {
  return {{"bound", c.bound},
          {"F0", c.F0},
          {"norm", c.norm},
          {"disk_norm", c.disk_norm},
          {"boundary_norm", c.boundary_norm},
          {"max_residual", c.max_residual},
          {"residuals", c.residuals},
          {"grid_shift", c.grid_shift},
          {"disk_cutoff", c.disk_cutoff},
          {"basis_size", c.basis_size},
          {"zero_order", c.zero_order},
          {"cutoff_N", c.cutoff_N},
          {"grid", c.grid},
          {"p_degree", c.p.empty() ? 0 : static_cast<int>(c.p.size()) - 1}};
}

json verdict_json(const Verdict& v) {
  return {{"kind", v.label()}, {"level", v.level}, {"threshold", v.threshold}, {"trend", v.trend}};
}

// Certificate failures that mean "no functional of this family exists at this
// resolution" rather than a broken stage.
bool certificate_unavailable(const std::string& code) {
  return code == "insufficient-decay" || code == "grid-too-coarse" || code == "no-disk-part";
}

// Minimum of |S| over the closed disk of radius 1 - 1/n: attained on the
// rim, sampled at spacing 1/(8n) (normalized) within 4/n of the support.
double rim_min(const std::vector<Atom>& atoms, int n) {
  const long long per_turn = 8LL * n;
  std::set<long long> idx;
  for (const Atom& a : atoms) {
    const double u = to_unit(a.angle);
    const long long lo = static_cast<long long>(std::floor((u - 4.0 / n) * per_turn));
    const long long hi = static_cast<long long>(std::ceil((u + 4.0 / n) * per_turn));
    for (long long m = lo; m <= hi; ++m) idx.insert(((m % per_turn) + per_turn) % per_turn);
  }
  const std::vector<long long> nodes(idx.begin(), idx.end());
  std::vector<double> v(nodes.size());
  const double r = 1.0 - 1.0 / n;
  parallel_for(static_cast<int>(nodes.size()), [&](int i) {
    v[i] = std::abs(eval_singular_inner(atoms, std::polar(r, kTwoPi * nodes[i] / per_turn)).value);
  });
  return v.empty() ? 1.0 : *std::min_element(v.begin(), v.end());
}

json roberts_section(const RobertsConfig& rc, const SingularMeasure& nu, std::vector<double>* calib_n,
                     std::vector<double>* calib_log) {
  const RobertsDecomposition d = roberts_decompose(nu, rc.c, rc.N, rc.M);
  json pieces = json::array();
  for (const RobertsPiece& p : d.pieces) {
    const double mass = p.measure.total_mass();
    json pj = {{"scale", p.scale},       {"cap", p.cap},   {"modulus", p.modulus}, {"grid_fraction", p.grid_fraction},
               {"retries", p.retries},   {"mass", mass},   {"passes", p.modulus <= p.cap}};
    if (mass > 0.0 && p.scale <= 65536.0) {
      const int n = static_cast<int>(p.scale);
      const double m = rim_min(p.measure.realized(), n);
      pj["rim_min_modulus"] = m;
      if (m > 0.0 && m < 1.0) {
        calib_n->push_back(std::log(p.scale));
        calib_log->push_back(-std::log(m));
      }
    }
    pieces.push_back(pj);
  }
  return {{"c", rc.c},
          {"N", rc.N},
          {"M", rc.M},
          {"log", "natural"},
          {"input_mass", d.input_mass},
          {"remainder_mass", d.remainder.total_mass()},
          {"mass_defect", d.mass_defect},
          {"pieces", pieces}};
}

std::vector<cplx> closed_disk_grid(int points) {
  // Rings r = i / R (i = 1..R, R = 10) with points/R nodes each, plus the centre.
  const int R = 10, per = std::max(8, points / R);
  std::vector<cplx> z{0.0};
  for (int i = 1; i <= R; ++i) {
    for (int m = 0; m < per; ++m) z.push_back(std::polar(static_cast<double>(i) / R, kTwoPi * (m + 0.5 * (i % 2)) / per));
  }
  return z;
}

// The corona constant is not computed; K = 1 throughout.
constexpr double kCoronaK = 1.0;

json companion_section(const CompanionConfig& cc, const ThetaConfig& theta, const SpaceMeasure& mu, double c1,
                       const QuadratureOptions& q) {
  const double beta = monomial_decay(mu, 2.0, 400).beta;
  const double c = cc.c ? *cc.c : beta / (6.0 * c1 * kCoronaK);
  const double rho = support_distance(theta.spec.singular, mu).value_or(0.0);
  const double sigma = cc.sigma_fraction * c * c1 * rho * rho / 8.0;
  const CircleSet& F = mu.boundary.carrier;
  const CircleSet support = support_set(theta.spec.singular);
  json rows = json::array();
  std::vector<double> ln_n, ln_norm;
  const std::vector<cplx> grid = closed_disk_grid(cc.grid_points);
  for (int n : cc.n) {
    const BoundedFunctionSpec f = companion_function(n, F, sigma);
    const Evaluator ev(f);
    std::vector<double> mods(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) { mods[i] = std::abs(ev(grid[i]).value); });
    const double max_mod = *std::max_element(mods.begin(), mods.end());
    Region reg;
    reg.kind = Region::Kind::complement;
    reg.n = n;
    reg.support = support;
    reg.rho = rho;
    const GridSpec gs{8, std::max(256, 8 * n)};
    const std::vector<cplx> outer = region_nodes(reg, gs);
    std::vector<double> low(outer.size());
    parallel_for(static_cast<int>(outer.size()), [&](int i) { low[i] = std::abs(ev(outer[i]).value); });
    const double bound = 0.25 * std::pow(static_cast<double>(n), -8.0 * sigma / (rho * rho));
    const double min_low = low.empty() ? 1.0 : *std::min_element(low.begin(), low.end());
    const double norm = pt_norm(f, mu, 2.0, q);
    ln_n.push_back(std::log(static_cast<double>(n)));
    ln_norm.push_back(std::log(norm));
    rows.push_back({{"n", n},
                    {"max_modulus", max_mod},
                    {"grid_nodes", grid.size()},
                    {"outer_nodes", outer.size()},
                    {"outer_min_modulus", min_low},
                    {"lower_bound", bound},
                    {"lower_bound_holds", outer.empty() || min_low >= bound},
                    {"norm", norm}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < ln_norm.size(); ++i) decreasing = decreasing && ln_norm[i] < ln_norm[i - 1];
  double slope = 0.0;
  if (ln_n.size() >= 2) {
    const double mx = std::accumulate(ln_n.begin(), ln_n.end(), 0.0) / ln_n.size();
    const double my = std::accumulate(ln_norm.begin(), ln_norm.end(), 0.0) / ln_norm.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ln_n.size(); ++i) {
      sxy += (ln_n[i] - mx) * (ln_norm[i] - my);
      sxx += (ln_n[i] - mx) * (ln_n[i] - mx);
    }
    slope = sxy / sxx;
  }
  const double target = -3.0 * c * c1 * kCoronaK;
  return {{"theta", cc.theta},
          {"rho", rho},
          {"beta", beta},
          {"c", c},
          {"c_source", cc.c ? "config" : "beta/(6 c1 K)"},
          {"c1", c1},
          {"K", kCoronaK},
          {"sigma", sigma},
          {"sigma_fraction", cc.sigma_fraction},
          {"norms_decreasing", decreasing},
          {"norm_slope", slope},
          {"slope_target", target},
          {"slope_holds", slope <= target},
          {"rows", rows}};
}

} // namespace

std::string curve_csv(const ThetaResult& r) {
  std::string out = "N,d_N,best_dual_bound,verdict\n";
  const double bound = r.certificate ? r.certificate->bound : 0.0;
  const std::string verdict = r.verdict.label();
  char buf[128];
  for (std::size_t i = 0; i < r.curve.degrees.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,", r.curve.degrees[i], r.curve.values[i], bound);
    out += buf;
    out += verdict;
    out += '\n';
  }
  return out;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

RunResult run_experiment(const ExperimentConfig& c) {
  RunResult res;
  json report;
  report["name"] = c.name;
  report["config"] = config_to_json(c);
  json errors = json::array();
  json thetas = json::array();
  for (const ThetaConfig& t : c.thetas) {
    ThetaResult tr;
    tr.label = t.label;
    json tj;
    tj["label"] = t.label;
    const auto rho = support_distance(t.spec.singular, c.space);
    tj["rho"] = rho ? json(*rho) : json(nullptr);
    bool ok = true;
    try {
      tr.curve = distance_curve(t.spec, c.space, c.degrees, c.quadrature);
      tj["curve"] = curve_json(tr.curve);
    } catch (const Error& e) {
      errors.push_back({{"stage", "distance"}, {"theta", t.label}, {"code", e.code()}, {"message", e.what()}});
      ok = false;
    }
    if (ok && t.certificate) {
      try {
        const CertificateContext ctx(t.spec, c.space, c.certificate, c.quadrature);
        tr.certificate = best_certificate(ctx);
        tj["certificate"] = certificate_json(*tr.certificate);
        tj["certificate"]["status"] = "ok";
      } catch (const Error& e) {
        if (certificate_unavailable(e.code())) {
          tj["certificate"] = {{"status", "unavailable"}, {"code", e.code()}, {"message", e.what()}};
        } else {
          errors.push_back({{"stage", "certificate"}, {"theta", t.label}, {"code", e.code()}, {"message", e.what()}});
          ok = false;
        }
      }
    } else if (!t.certificate) {
      tj["certificate"] = {{"status", "not-requested"}};
    }
    if (ok) {
      std::vector<DualCertificate> certs;
      if (tr.certificate) certs.push_back(*tr.certificate);
      tr.verdict = classify(tr.curve, certs, c.evidence_threshold, c.certificate.residual_tol);
      tj["verdict"] = verdict_json(tr.verdict);
      if (tr.certificate) {
        const double dmin = *std::min_element(tr.curve.values.begin(), tr.curve.values.end());
        tj["weak_duality"] = {{"min_d", dmin}, {"bound", tr.certificate->bound}, {"holds", tr.certificate->bound <= dmin + 1e-10}};
      }
      res.files.emplace_back(t.label + ".csv", curve_csv(tr));
    }
    thetas.push_back(tj);
  }
  report["thetas"] = thetas;

  double c1 = 0.0;
  if (c.roberts) {
    try {
      const auto it = std::find_if(c.thetas.begin(), c.thetas.end(), [&](const ThetaConfig& t) { return t.label == c.roberts->theta; });
      std::vector<double> ln_n, ln_inv;
      report["roberts"] = roberts_section(*c.roberts, it->spec.singular, &ln_n, &ln_inv);
      // -log min|S_k| = c c1 log n_k, least squares through the origin.
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < ln_n.size(); ++i) {
        sxy += ln_n[i] * ln_inv[i];
        sxx += ln_n[i] * ln_n[i];
      }
      c1 = sxx > 0.0 ? sxy / sxx / c.roberts->c : 0.0;
      report["roberts"]["c1"] = c1;
    } catch (const Error& e) {
      errors.push_back({{"stage", "roberts"}, {"code", e.code()}, {"message", e.what()}});
    }
  }
  if (c.companion) {
    try {
      const auto it = std::find_if(c.thetas.begin(), c.thetas.end(), [&](const ThetaConfig& t) { return t.label == c.companion->theta; });
      if (!(c1 > 0.0)) throw Error("no-calibration", "companion sigma needs a calibrated c1 from the roberts section");
      report["companion"] = companion_section(*c.companion, *it, c.space, c1, c.quadrature);
    } catch (const Error& e) {
      errors.push_back({{"stage", "companion"}, {"code", e.code()}, {"message", e.what()}});
    }
  }
  report["errors"] = errors;
  res.failed = !errors.empty();
  res.report = report;
  res.files.emplace_back("report.json", dump_json(report));
  return res;
}

void write_files(const std::filesystem::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("io", "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, text] : files) {
    const auto target = dir / name;
    const auto tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << text;
      out.flush();
      if (!out) throw Error("io", "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw Error("io", "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error("parse", p.string() + ": " + e.what());
  }
}

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '[' || ch == ']' || ch == '{' || ch == '}' || ch == ':') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool as_number(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && !s.empty();
}

std::string compare_text(const std::string& a, const std::string& b, double rtol) {
  if (a == b) return "";
  const auto ta = tokens(a), tb = tokens(b);
  if (ta.size() != tb.size()) return "token count " + std::to_string(ta.size()) + " vs " + std::to_string(tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i] == tb[i]) continue;
    double x, y;
    if (as_number(ta[i], x) && as_number(tb[i], y)) {
      if (std::abs(x - y) <= rtol * std::max(std::abs(x), std::abs(y))) continue;
    }
    return "token " + std::to_string(i) + ": '" + ta[i] + "' vs '" + tb[i] + "'";
  }
  return "";
}

std::vector<std::filesystem::path> manifest_configs(const std::filesystem::path& dir) {
  const json m = read_json(dir / "manifest.json");
  if (!m.contains("configs") || !m["configs"].is_array()) throw Error("parse", "manifest.json needs a configs array");
  std::vector<std::filesystem::path> out;
  for (const json& p : m["configs"]) out.push_back(dir / p.get<std::string>());
  return out;
}

} // namespace

std::vector<GoldenMismatch> goldens_check(const std::filesystem::path& dir, double rtol) {
  std::vector<GoldenMismatch> out;
  for (const auto& cfg : manifest_configs(dir)) {
    const ExperimentConfig c = parse_config(read_json(cfg));
    const RunResult r = run_experiment(c);
    if (r.failed) out.push_back({c.name, "run reported stage errors"});
    for (const auto& [name, text] : r.files) {
      const auto golden = dir / c.name / name;
      if (!std::filesystem::exists(golden)) {
        out.push_back({c.name + "/" + name, "missing golden file"});
        continue;
      }
      const std::string d = compare_text(slurp(golden), text, rtol);
      if (!d.empty()) out.push_back({c.name + "/" + name, d});
    }
  }
  return out;
}

void goldens_update(const std::filesystem::path& dir) {
  for (const auto& cfg : manifest_configs(dir)) {
    const ExperimentConfig c = parse_config(read_json(cfg));
    const RunResult r = run_experiment(c);
    if (r.failed) throw Error("run-failed", c.name + ": stage errors, goldens not updated");
    write_files(dir / c.name, r.files);
  }
}

} // namespace ptmu
