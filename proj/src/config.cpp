#include "ptmu/error.hpp"
#include "ptmu/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ptmu {

ValidationError::ValidationError(std::vector<Diagnostic> d)
    : std::runtime_error(d.empty() ? "invalid config" : d.front().code + " at " + d.front().path + ": " + d.front().message),
      diags_(std::move(d)) {}

namespace {

// Walks the document once, building the config and collecting diagnostics.
class Builder {
public:
  explicit Builder(std::vector<Diagnostic>& d) : diags_(d) {}

  void fail(std::string code, const std::string& path, std::string msg) {
    diags_.push_back({std::move(code), path.empty() ? "/" : path, std::move(msg)});
  }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail("TYPE_ERROR", path, "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items()) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end()) {
        fail("UNKNOWN_FIELD", path + "/" + k, "unknown field '" + k + "'");
      }
    }
    return true;
  }

  const json* field(const json& j, const char* key, const std::string& path, bool required) {
    if (!j.is_object() || !j.contains(key)) {
      if (required) fail("MISSING_FIELD", path + "/" + key, std::string("missing field '") + key + "'");
      return nullptr;
    }
    return &j.at(key);
  }

  double number(const json& j, const char* key, const std::string& path, std::optional<double> def) {
    const json* v = field(j, key, path, !def.has_value());
    if (!v) return def.value_or(0.0);
    if (!v->is_number()) {
      fail("TYPE_ERROR", path + "/" + key, "expected a number");
      return def.value_or(0.0);
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail("TYPE_ERROR", path + "/" + key, "expected a finite number");
    return x;
  }

  int integer(const json& j, const char* key, const std::string& path, std::optional<int> def) {
    const json* v = field(j, key, path, !def.has_value());
    if (!v) return def.value_or(0);
    if (!v->is_number_integer()) {
      fail("TYPE_ERROR", path + "/" + key, "expected an integer");
      return def.value_or(0);
    }
    return v->get<int>();
  }

  bool boolean(const json& j, const char* key, const std::string& path, bool def) {
    const json* v = field(j, key, path, false);
    if (!v) return def;
    if (!v->is_boolean()) {
      fail("TYPE_ERROR", path + "/" + key, "expected a boolean");
      return def;
    }
    return v->get<bool>();
  }

  std::string string(const json& j, const char* key, const std::string& path, std::optional<std::string> def) {
    const json* v = field(j, key, path, !def.has_value());
    if (!v) return def.value_or("");
    if (!v->is_string()) {
      fail("TYPE_ERROR", path + "/" + key, "expected a string");
      return def.value_or("");
    }
    return v->get<std::string>();
  }

  Arc arc(const json& j, const std::string& path) {
    Arc a;
    if (!object(j, path, {"start", "length"})) return a;
    a.start = number(j, "start", path, std::nullopt);
    a.length = number(j, "length", path, std::nullopt);
    return a;
  }

  std::optional<CircleSet> circle_set(const json& j, const std::string& path) {
    if (!object(j, path, {"arcs", "truncated"})) return std::nullopt;
    std::vector<Arc> arcs;
    if (const json* a = field(j, "arcs", path, true)) {
      if (!a->is_array()) {
        fail("TYPE_ERROR", path + "/arcs", "expected an array");
      } else {
        for (std::size_t i = 0; i < a->size(); ++i) arcs.push_back(arc((*a)[i], path + "/arcs/" + std::to_string(i)));
      }
    }
    const bool truncated = boolean(j, "truncated", path, false);
    try {
      return CircleSet::from_complement(arcs, truncated);
    } catch (const Error& e) {
      fail("ARC_INVALID", path + "/arcs", e.what());
      return std::nullopt;
    }
  }

  WeightPiece weight_piece(const json& j, const std::string& path) {
    WeightPiece w;
    if (!object(j, path, {"kind", "value", "coeffs", "gamma"})) return w;
    const std::string kind = string(j, "kind", path, std::nullopt);
    if (kind == "constant") {
      w.kind = WeightPiece::Kind::constant;
      w.value = number(j, "value", path, std::nullopt);
      if (!(w.value > 0.0)) fail("WEIGHT_INVALID", path + "/value", "weight must be positive");
    } else if (kind == "polynomial") {
      w.kind = WeightPiece::Kind::polynomial;
      const json* c = field(j, "coeffs", path, true);
      if (c && c->is_array() && !c->empty()) {
        for (std::size_t i = 0; i < c->size(); ++i) {
          if (!(*c)[i].is_number()) fail("TYPE_ERROR", path + "/coeffs/" + std::to_string(i), "expected a number");
          else w.coeffs.push_back((*c)[i].get<double>());
        }
      } else if (c) {
        fail("TYPE_ERROR", path + "/coeffs", "expected a nonempty array");
      }
    } else if (kind == "cusp") {
      w.kind = WeightPiece::Kind::cusp;
      w.value = number(j, "value", path, 1.0);
      w.gamma = number(j, "gamma", path, std::nullopt);
      if (!(w.value > 0.0)) fail("WEIGHT_INVALID", path + "/value", "weight must be positive");
      if (!(w.gamma > 0.0 && w.gamma < 1.0)) {
        fail("WEIGHT_INVALID", path + "/gamma", "cusp exponent must lie in (0, 1) for log-integrability");
      }
    } else {
      fail("WEIGHT_INVALID", path + "/kind", "unknown weight kind '" + kind + "'");
    }
    return w;
  }

  void space(const json& j, const std::string& path, SpaceMeasure& mu) {
    if (!object(j, path, {"disk", "boundary", "t"})) return;
    mu.t = number(j, "t", path, 2.0);
    if (!(mu.t >= 1.0)) fail("T_RANGE", path + "/t", "distance minimization needs t >= 1");
    mu.disk_mass_scale = 0.0;
    if (const json* d = field(j, "disk", path, false); d && !d->is_null()) {
      const std::string dp = path + "/disk";
      if (object(*d, dp, {"alpha", "scale"})) {
        mu.disk_alpha = number(*d, "alpha", dp, 0.0);
        mu.disk_mass_scale = number(*d, "scale", dp, 1.0);
        if (!(mu.disk_alpha > -1.0)) fail("ALPHA_RANGE", dp + "/alpha", "alpha must exceed -1");
        if (!(mu.disk_mass_scale >= 0.0)) fail("MASS_RANGE", dp + "/scale", "disk scale must be nonnegative");
      }
    }
    if (const json* b = field(j, "boundary", path, false); b && !b->is_null()) {
      const std::string bp = path + "/boundary";
      if (object(*b, bp, {"carrier", "pieces"})) {
        std::optional<CircleSet> E;
        if (const json* c = field(*b, "carrier", bp, true)) E = circle_set(*c, bp + "/carrier");
        std::vector<WeightPiece> pieces;
        if (const json* p = field(*b, "pieces", bp, true)) {
          if (!p->is_array() || p->empty()) {
            fail("TYPE_ERROR", bp + "/pieces", "expected a nonempty array");
          } else {
            for (std::size_t i = 0; i < p->size(); ++i) pieces.push_back(weight_piece((*p)[i], bp + "/pieces/" + std::to_string(i)));
          }
        }
        if (E && !pieces.empty()) {
          try {
            mu.boundary = BoundaryWeight(*E, pieces);
          } catch (const Error& e) {
            fail("WEIGHT_INVALID", bp + "/pieces", e.what());
          }
        }
      }
    }
    if (mu.disk_mass_scale == 0.0 && mu.boundary.is_zero()) fail("NO_MEASURE", path, "space measure has zero mass");
  }

  CantorRule rule(const json& j, const std::string& path) {
    CantorRule r;
    if (!object(j, path, {"kind", "ratio", "scale", "power", "gaps"})) return r;
    const std::string kind = string(j, "kind", path, std::nullopt);
    if (kind == "ratio") {
      r.kind = CantorRule::Kind::ratio;
      r.ratio = number(j, "ratio", path, std::nullopt);
      if (!(r.ratio > 0.0 && r.ratio < 1.0)) fail("CANTOR_INVALID", path + "/ratio", "ratio must lie in (0, 1)");
    } else if (kind == "scaled_gap") {
      r.kind = CantorRule::Kind::scaled_gap;
      r.ratio = 0.0;
      r.scale = number(j, "scale", path, 4.0);
      r.power = number(j, "power", path, 1.0);
      if (!(r.scale > 0.0)) fail("CANTOR_INVALID", path + "/scale", "scale must be positive");
    } else if (kind == "table") {
      r.kind = CantorRule::Kind::table;
      r.ratio = 0.0;
      const json* g = field(j, "gaps", path, true);
      if (g && g->is_array()) {
        for (std::size_t i = 0; i < g->size(); ++i) {
          const json& x = (*g)[i];
          if (!x.is_number() || !(x.get<double>() > 0.0)) fail("CANTOR_INVALID", path + "/gaps/" + std::to_string(i), "gaps must be positive numbers");
          else r.gaps.push_back(x.get<double>());
        }
      } else if (g) {
        fail("TYPE_ERROR", path + "/gaps", "expected an array");
      }
    } else {
      fail("CANTOR_INVALID", path + "/kind", "unknown rule kind '" + kind + "'");
    }
    return r;
  }

  SingularMeasure singular(const json& j, const std::string& path) {
    if (!object(j, path, {"atoms", "cantor"})) return {};
    std::vector<Atom> atoms;
    std::vector<CantorComponent> cantor;
    bool ok = true;
    if (const json* a = field(j, "atoms", path, false)) {
      if (!a->is_array()) {
        fail("TYPE_ERROR", path + "/atoms", "expected an array");
        ok = false;
      } else {
        for (std::size_t i = 0; i < a->size(); ++i) {
          const std::string ap = path + "/atoms/" + std::to_string(i);
          if (!object((*a)[i], ap, {"angle", "mass"})) {
            ok = false;
            continue;
          }
          Atom at;
          at.angle = number((*a)[i], "angle", ap, std::nullopt);
          at.mass = number((*a)[i], "mass", ap, std::nullopt);
          if (!(at.mass > 0.0)) {
            fail("MASS_RANGE", ap + "/mass", "atom masses must be positive");
            ok = false;
          }
          atoms.push_back(at);
        }
      }
    }
    if (const json* c = field(j, "cantor", path, false)) {
      if (!c->is_array()) {
        fail("TYPE_ERROR", path + "/cantor", "expected an array");
        ok = false;
      } else {
        for (std::size_t i = 0; i < c->size(); ++i) {
          const std::string cp = path + "/cantor/" + std::to_string(i);
          const json& cj = (*c)[i];
          if (!object(cj, cp, {"base", "rule", "mass", "depth"})) {
            ok = false;
            continue;
          }
          CantorComponent cc;
          if (const json* b = field(cj, "base", cp, true)) cc.generator.base = arc(*b, cp + "/base");
          if (const json* r = field(cj, "rule", cp, true)) cc.generator.rule = rule(*r, cp + "/rule");
          cc.mass = number(cj, "mass", cp, std::nullopt);
          cc.depth = integer(cj, "depth", cp, std::nullopt);
          if (!(cc.mass > 0.0)) {
            fail("MASS_RANGE", cp + "/mass", "Cantor mass must be positive");
            ok = false;
          }
          if (cc.depth < 0 || cc.depth > 14) {
            fail("CANTOR_INVALID", cp + "/depth", "depth must lie in [0, 14]");
            ok = false;
          } else if (!(cc.generator.base.length > 0.0 && cc.generator.base.length <= 1.0)) {
            fail("CANTOR_INVALID", cp + "/base/length", "base length must lie in (0, 1]");
            ok = false;
          } else {
            try {
              (void)cc.generator.levels(cc.depth);
            } catch (const Error& e) {
              fail("CANTOR_INVALID", cp + "/rule", e.what());
              ok = false;
            }
          }
          cantor.push_back(cc);
        }
      }
    }
    if (!ok) return {};
    try {
      return SingularMeasure(atoms, cantor);
    } catch (const Error& e) {
      fail("MASS_RANGE", path, e.what());
      return {};
    }
  }

  ThetaConfig theta(const json& j, const std::string& path) {
    ThetaConfig t;
    if (!object(j, path, {"label", "zeros", "singular", "monomial_power", "phase", "expect", "certificate"})) return t;
    t.label = string(j, "label", path, std::nullopt);
    if (const json* z = field(j, "zeros", path, false)) {
      if (!z->is_array()) {
        fail("TYPE_ERROR", path + "/zeros", "expected an array of [re, im] pairs");
      } else {
        for (std::size_t i = 0; i < z->size(); ++i) {
          const json& p = (*z)[i];
          const std::string zp = path + "/zeros/" + std::to_string(i);
          if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            fail("TYPE_ERROR", zp, "expected [re, im]");
            continue;
          }
          const cplx a(p[0].get<double>(), p[1].get<double>());
          if (!(std::abs(a) < 1.0)) fail("ZERO_OUTSIDE_DISK", zp, "Blaschke zeros must lie in the open disk");
          t.spec.zeros.push_back(a);
        }
      }
    }
    if (const json* s = field(j, "singular", path, false)) t.spec.singular = singular(*s, path + "/singular");
    t.spec.monomial_power = integer(j, "monomial_power", path, 0);
    if (t.spec.monomial_power < 0) fail("TYPE_ERROR", path + "/monomial_power", "must be nonnegative");
    t.spec.phase = number(j, "phase", path, 0.0);
    const std::string e = string(j, "expect", path, "none");
    if (e == "cyclic") t.expect = Expectation::cyclic;
    else if (e == "noncyclic") t.expect = Expectation::noncyclic;
    else if (e != "none") fail("TYPE_ERROR", path + "/expect", "expect must be none, cyclic or noncyclic");
    t.certificate = boolean(j, "certificate", path, false);
    return t;
  }

private:
  std::vector<Diagnostic>& diags_;
};

bool valid_name(const std::string& s) {
  if (s.empty() || s.size() > 128 || s.front() == '.') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

ExperimentConfig build(const json& doc, std::vector<Diagnostic>& diags) {
  Builder b(diags);
  ExperimentConfig c;
  if (!b.object(doc, "", {"name", "space", "thetas", "degrees", "quadrature", "certificate", "thresholds", "roberts", "companion"})) {
    return c;
  }
  c.name = b.string(doc, "name", "", std::nullopt);
  if (!valid_name(c.name)) b.fail("NAME_INVALID", "/name", "name must be a nonempty file-name-safe string");
  if (const json* s = b.field(doc, "space", "", true)) b.space(*s, "/space", c.space);

  if (const json* d = b.field(doc, "degrees", "", false)) {
    c.degrees.clear();
    if (!d->is_array() || d->empty()) {
      b.fail("DEGREES_INVALID", "/degrees", "expected a nonempty array of integers");
    } else {
      for (std::size_t i = 0; i < d->size(); ++i) {
        if (!(*d)[i].is_number_integer()) {
          b.fail("DEGREES_INVALID", "/degrees/" + std::to_string(i), "expected an integer");
          continue;
        }
        c.degrees.push_back((*d)[i].get<int>());
      }
      for (std::size_t i = 0; i < c.degrees.size(); ++i) {
        if (c.degrees[i] < 0 || c.degrees[i] > 400) b.fail("DEGREES_INVALID", "/degrees/" + std::to_string(i), "degrees must lie in [0, 400]");
        if (i > 0 && c.degrees[i] <= c.degrees[i - 1]) b.fail("DEGREES_INVALID", "/degrees/" + std::to_string(i), "degrees must be strictly ascending");
      }
    }
  }

  if (const json* q = b.field(doc, "quadrature", "", false)) {
    const std::string p = "/quadrature";
    if (b.object(*q, p, {"angular_log2", "radial_nodes", "boundary_dmin", "boundary_hmax", "boundary_order"})) {
      auto& o = c.quadrature;
      o.angular_log2 = b.integer(*q, "angular_log2", p, o.angular_log2);
      o.radial_nodes = b.integer(*q, "radial_nodes", p, o.radial_nodes);
      o.boundary_dmin = b.number(*q, "boundary_dmin", p, o.boundary_dmin);
      o.boundary_hmax = b.number(*q, "boundary_hmax", p, o.boundary_hmax);
      o.boundary_order = b.integer(*q, "boundary_order", p, o.boundary_order);
      if (o.angular_log2 < 6 || o.angular_log2 > 16) b.fail("QUADRATURE_RANGE", p + "/angular_log2", "must lie in [6, 16]");
      if (o.radial_nodes < 8 || o.radial_nodes > 1024) b.fail("QUADRATURE_RANGE", p + "/radial_nodes", "must lie in [8, 1024]");
      if (!(o.boundary_dmin > 0.0 && o.boundary_dmin <= 1e-2)) b.fail("QUADRATURE_RANGE", p + "/boundary_dmin", "must lie in (0, 1e-2]");
      if (!(o.boundary_hmax > 0.0 && o.boundary_hmax <= 0.5)) b.fail("QUADRATURE_RANGE", p + "/boundary_hmax", "must lie in (0, 0.5]");
      if (o.boundary_order < 2 || o.boundary_order > 64) b.fail("QUADRATURE_RANGE", p + "/boundary_order", "must lie in [2, 64]");
    }
  }
  if (!c.degrees.empty() && c.quadrature.angular_log2 <= 16 &&
      (1 << c.quadrature.angular_log2) < 8 * c.degrees.back()) {
    b.fail("QUADRATURE_RANGE", "/quadrature/angular_log2", "angular nodes must be at least 8 times the largest degree");
  }

  if (const json* q = b.field(doc, "certificate", "", false)) {
    const std::string p = "/certificate";
    if (b.object(*q, p, {"cutoff_N", "grid_log2", "basis_size", "zero_order", "endpoint_zeros", "residual_order", "residual_tol", "grid_tol"})) {
      auto& o = c.certificate;
      o.cutoff_N = b.integer(*q, "cutoff_N", p, o.cutoff_N);
      o.grid_log2 = b.integer(*q, "grid_log2", p, o.grid_log2);
      o.basis_size = b.integer(*q, "basis_size", p, o.basis_size);
      o.zero_order = b.integer(*q, "zero_order", p, o.zero_order);
      o.endpoint_zeros = b.boolean(*q, "endpoint_zeros", p, o.endpoint_zeros);
      o.residual_order = b.integer(*q, "residual_order", p, o.residual_order);
      o.residual_tol = b.number(*q, "residual_tol", p, o.residual_tol);
      o.grid_tol = b.number(*q, "grid_tol", p, o.grid_tol);
      if (o.cutoff_N < 0 || o.cutoff_N > 32) b.fail("CERTIFICATE_INVALID", p + "/cutoff_N", "must lie in [0, 32]");
      if (o.grid_log2 < 8 || o.grid_log2 > 20) b.fail("CERTIFICATE_INVALID", p + "/grid_log2", "must lie in [8, 20]");
      if (o.basis_size < 1 || o.basis_size > 32) b.fail("CERTIFICATE_INVALID", p + "/basis_size", "must lie in [1, 32]");
      if (o.zero_order < 0 || o.zero_order > 16) b.fail("CERTIFICATE_INVALID", p + "/zero_order", "must lie in [0, 16]");
      if (o.residual_order < 0 || (o.grid_log2 >= 8 && o.grid_log2 <= 20 && o.residual_order > (1 << o.grid_log2) / 4)) {
        b.fail("CERTIFICATE_INVALID", p + "/residual_order", "must lie in [0, grid / 4]");
      }
      if (!(o.residual_tol > 0.0)) b.fail("CERTIFICATE_INVALID", p + "/residual_tol", "must be positive");
      if (!(o.grid_tol > 0.0)) b.fail("CERTIFICATE_INVALID", p + "/grid_tol", "must be positive");
    }
  }

  if (const json* t = b.field(doc, "thresholds", "", false)) {
    if (b.object(*t, "/thresholds", {"evidence"})) {
      c.evidence_threshold = b.number(*t, "evidence", "/thresholds", c.evidence_threshold);
      if (!(c.evidence_threshold > 0.0)) b.fail("THRESHOLD_INVALID", "/thresholds/evidence", "must be positive");
    }
  }

  std::set<std::string> labels;
  if (const json* th = b.field(doc, "thetas", "", true)) {
    if (!th->is_array() || th->empty()) {
      b.fail("TYPE_ERROR", "/thetas", "expected a nonempty array");
    } else {
      for (std::size_t i = 0; i < th->size(); ++i) {
        const std::string p = "/thetas/" + std::to_string(i);
        ThetaConfig t = b.theta((*th)[i], p);
        if (!valid_name(t.label)) b.fail("NAME_INVALID", p + "/label", "label must be a nonempty file-name-safe string");
        if (!labels.insert(t.label).second) b.fail("DUPLICATE_LABEL", p + "/label", "duplicate theta label '" + t.label + "'");
        if (t.certificate) {
          if (c.space.t != 2.0) b.fail("T_RANGE", p + "/certificate", "certificates use t = 2");
          if (c.space.boundary.is_zero()) b.fail("CERTIFICATE_INVALID", p + "/certificate", "certificates need a boundary carrier");
        }
        if (t.expect == Expectation::cyclic) {
          const auto rho = support_distance(t.spec.singular, c.space);
          if (rho && !(*rho > 0.0)) {
            b.fail("RHO_ZERO", p + "/singular", "singular support meets the carrier (rho = 0); restrict the measure first");
          }
        }
        c.thetas.push_back(std::move(t));
      }
    }
  }

  if (const json* r = b.field(doc, "roberts", "", false); r && !r->is_null()) {
    const std::string p = "/roberts";
    if (b.object(*r, p, {"theta", "c", "N", "M"})) {
      RobertsConfig rc;
      rc.theta = b.string(*r, "theta", p, std::nullopt);
      rc.c = b.number(*r, "c", p, rc.c);
      rc.N = b.integer(*r, "N", p, rc.N);
      rc.M = b.integer(*r, "M", p, rc.M);
      if (!labels.count(rc.theta)) b.fail("UNKNOWN_THETA", p + "/theta", "no theta labelled '" + rc.theta + "'");
      if (!(rc.c > 0.0)) b.fail("ROBERTS_INVALID", p + "/c", "c must be positive");
      if (rc.N < 2) b.fail("ROBERTS_INVALID", p + "/N", "N must exceed 1");
      if (rc.M < 1) b.fail("ROBERTS_INVALID", p + "/M", "M must be at least 1");
      if (rc.N + rc.M - 1 > 9) b.fail("ROBERTS_INVALID", p + "/M", "scales 2^(2^(N+k)) overflow beyond N + k = 9");
      c.roberts = rc;
    }
  }

  if (const json* r = b.field(doc, "companion", "", false); r && !r->is_null()) {
    const std::string p = "/companion";
    if (b.object(*r, p, {"theta", "n", "sigma_fraction", "grid_points", "c"})) {
      CompanionConfig cc;
      cc.theta = b.string(*r, "theta", p, std::nullopt);
      if (const json* n = b.field(*r, "n", p, false)) {
        cc.n.clear();
        if (!n->is_array() || n->empty()) {
          b.fail("TYPE_ERROR", p + "/n", "expected a nonempty array of integers");
        } else {
          for (std::size_t i = 0; i < n->size(); ++i) {
            if (!(*n)[i].is_number_integer() || (*n)[i].get<int>() < 2 || (*n)[i].get<int>() > 4096) {
              b.fail("COMPANION_INVALID", p + "/n/" + std::to_string(i), "n must be an integer in [2, 4096]");
            } else {
              cc.n.push_back((*n)[i].get<int>());
            }
          }
        }
      }
      cc.sigma_fraction = b.number(*r, "sigma_fraction", p, cc.sigma_fraction);
      cc.grid_points = b.integer(*r, "grid_points", p, cc.grid_points);
      if (const json* cj = b.field(*r, "c", p, false); cj && !cj->is_null()) {
        if (!cj->is_number() || !(cj->get<double>() > 0.0) || !std::isfinite(cj->get<double>())) {
          b.fail("COMPANION_INVALID", p + "/c", "c must be a positive number or null");
        } else {
          cc.c = cj->get<double>();
        }
      }
      if (!(cc.sigma_fraction > 0.0 && cc.sigma_fraction < 1.0)) b.fail("COMPANION_INVALID", p + "/sigma_fraction", "must lie in (0, 1)");
      if (cc.grid_points < 16 || cc.grid_points > 100000) b.fail("COMPANION_INVALID", p + "/grid_points", "must lie in [16, 100000]");
      if (c.space.boundary.is_zero()) b.fail("COMPANION_INVALID", p, "the companion needs a boundary carrier");
      if (!labels.count(cc.theta)) {
        b.fail("UNKNOWN_THETA", p + "/theta", "no theta labelled '" + cc.theta + "'");
      } else {
        for (const ThetaConfig& t : c.thetas) {
          if (t.label != cc.theta) continue;
          const auto rho = support_distance(t.spec.singular, c.space);
          if (rho && !(*rho > 0.0)) b.fail("RHO_ZERO", p + "/theta", "companion needs rho > 0");
        }
      }
      c.companion = cc;
    }
  }
  return c;
}

json arc_json(const Arc& a) { return {{"start", a.start}, {"length", a.length}}; }

json rule_json(const CantorRule& r) {
  switch (r.kind) {
  case CantorRule::Kind::ratio:
    return {{"kind", "ratio"}, {"ratio", r.ratio}};
  case CantorRule::Kind::scaled_gap:
    return {{"kind", "scaled_gap"}, {"scale", r.scale}, {"power", r.power}};
  case CantorRule::Kind::table:
    return {{"kind", "table"}, {"gaps", r.gaps}};
  }
  return {};
}

json weight_json(const WeightPiece& w) {
  switch (w.kind) {
  case WeightPiece::Kind::constant:
    return {{"kind", "constant"}, {"value", w.value}};
  case WeightPiece::Kind::polynomial:
    return {{"kind", "polynomial"}, {"coeffs", w.coeffs}};
  case WeightPiece::Kind::cusp:
    return {{"kind", "cusp"}, {"value", w.value}, {"gamma", w.gamma}};
  }
  return {};
}

std::string expect_name(Expectation e) {
  switch (e) {
  case Expectation::cyclic:
    return "cyclic";
  case Expectation::noncyclic:
    return "noncyclic";
  case Expectation::none:
    return "none";
  }
  return "none";
}

} // namespace

std::vector<Diagnostic> validate(const json& doc) {
  std::vector<Diagnostic> d;
  try {
    (void)build(doc, d);
  } catch (const std::exception& e) {
    d.push_back({"INTERNAL", "/", e.what()});
  }
  return d;
}

ExperimentConfig parse_config(const json& doc) {
  std::vector<Diagnostic> d;
  ExperimentConfig c = build(doc, d);
  if (!d.empty()) throw ValidationError(std::move(d));
  return c;
}

json circle_set_to_json(const CircleSet& s) {
  json arcs = json::array();
  for (const Arc& a : s.complementary_arcs()) arcs.push_back(arc_json(a));
  return {{"arcs", arcs}, {"truncated", s.truncated()}};
}

json measure_to_json(const SingularMeasure& nu) {
  json atoms = json::array(), cantor = json::array();
  for (const Atom& a : nu.atoms()) atoms.push_back({{"angle", a.angle}, {"mass", a.mass}});
  for (const CantorComponent& c : nu.cantor()) {
    cantor.push_back({{"base", arc_json(c.generator.base)}, {"rule", rule_json(c.generator.rule)}, {"mass", c.mass}, {"depth", c.depth}});
  }
  return {{"atoms", atoms}, {"cantor", cantor}};
}

json config_to_json(const ExperimentConfig& c) {
  json space;
  space["t"] = c.space.t;
  space["disk"] = c.space.disk_mass_scale > 0.0 ? json{{"alpha", c.space.disk_alpha}, {"scale", c.space.disk_mass_scale}} : json(nullptr);
  if (c.space.boundary.is_zero()) {
    space["boundary"] = nullptr;
  } else {
    json pieces = json::array();
    for (const WeightPiece& w : c.space.boundary.pieces) pieces.push_back(weight_json(w));
    space["boundary"] = {{"carrier", circle_set_to_json(c.space.boundary.carrier)}, {"pieces", pieces}};
  }
  json thetas = json::array();
  for (const ThetaConfig& t : c.thetas) {
    json zeros = json::array();
    for (const cplx& z : t.spec.zeros) zeros.push_back({z.real(), z.imag()});
    thetas.push_back({{"label", t.label},
                      {"zeros", zeros},
                      {"singular", measure_to_json(t.spec.singular)},
                      {"monomial_power", t.spec.monomial_power},
                      {"phase", t.spec.phase},
                      {"expect", expect_name(t.expect)},
                      {"certificate", t.certificate}});
  }
  const auto& q = c.quadrature;
  const auto& o = c.certificate;
  json j = {{"name", c.name},
            {"space", space},
            {"thetas", thetas},
            {"degrees", c.degrees},
            {"quadrature",
             {{"angular_log2", q.angular_log2},
              {"radial_nodes", q.radial_nodes},
              {"boundary_dmin", q.boundary_dmin},
              {"boundary_hmax", q.boundary_hmax},
              {"boundary_order", q.boundary_order}}},
            {"certificate",
             {{"cutoff_N", o.cutoff_N},
              {"grid_log2", o.grid_log2},
              {"basis_size", o.basis_size},
              {"zero_order", o.zero_order},
              {"endpoint_zeros", o.endpoint_zeros},
              {"residual_order", o.residual_order},
              {"residual_tol", o.residual_tol},
              {"grid_tol", o.grid_tol}}},
            {"thresholds", {{"evidence", c.evidence_threshold}}}};
  j["roberts"] = c.roberts ? json{{"theta", c.roberts->theta}, {"c", c.roberts->c}, {"N", c.roberts->N}, {"M", c.roberts->M}} : json(nullptr);
  j["companion"] = c.companion ? json{{"theta", c.companion->theta},
                                      {"n", c.companion->n},
                                      {"sigma_fraction", c.companion->sigma_fraction},
                                      {"grid_points", c.companion->grid_points},
                                      {"c", c.companion->c ? json(*c.companion->c) : json(nullptr)}}
                               : json(nullptr);
  return j;
}

json diagnostics_to_json(const std::vector<Diagnostic>& d) {
  json out = json::array();
  for (const Diagnostic& x : d) out.push_back({{"code", x.code}, {"path", x.path}, {"message", x.message}});
  return out;
}

std::optional<double> support_distance(const SingularMeasure& nu, const SpaceMeasure& mu) {
  if (mu.boundary.is_zero()) return std::nullopt;
  const CircleSet& E = mu.boundary.carrier;
  double rho = std::numeric_limits<double>::infinity();
  auto visit = [&](double angle) { rho = std::min(rho, distance_to(E, unit(angle))); };
  for (const Atom& a : nu.atoms()) visit(a.angle);
  for (const CantorComponent& c : nu.cantor()) {
    const auto levels = c.generator.levels(c.depth);
    for (const Interval& iv : levels.back()) {
      visit(kTwoPi * iv.lo);
      visit(kTwoPi * iv.hi);
      // A leaf may straddle a carrier component.
      if (E.contains(kTwoPi * iv.mid())) rho = 0.0;
      for (const Arc& comp : E.components()) {
        const double u = wrap_angle(comp.start) / kTwoPi;
        for (double shift : {-1.0, 0.0, 1.0}) {
          if (u + shift >= iv.lo && u + shift <= iv.hi) rho = 0.0;
        }
      }
    }
  }
  if (!std::isfinite(rho)) return std::nullopt;
  return rho;
}

} // namespace ptmu
