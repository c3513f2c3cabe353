#include "ptmu/ptmu.h"

#include "ptmu/error.hpp"
#include "ptmu/experiment.hpp"

#include <cstring>
#include <string>

struct ptmu_config {
  ptmu::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ptmu_status fail(ptmu_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

ptmu_status status_of(const ptmu::Error& e) {
  if (e.code() == "io") return PTMU_E_IO;
  if (e.code() == "parse") return PTMU_E_VALIDATION;
  return PTMU_E_NUMERIC;
}

// Runs body, translating exceptions into status codes.
template <class F>
ptmu_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const ptmu::ValidationError& e) {
    return fail(PTMU_E_VALIDATION, ptmu::diagnostics_to_json(e.diagnostics()).dump());
  } catch (const ptmu::Error& e) {
    return fail(status_of(e), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PTMU_E_IO, e.what());
  } catch (const std::exception& e) {
    return fail(PTMU_E_NUMERIC, e.what());
  }
}

ptmu_status parse_into(const ptmu::json& doc, ptmu_config** out) {
  auto* h = new ptmu_config{ptmu::parse_config(doc)};
  *out = h;
  return PTMU_OK;
}

} // namespace

extern "C" {

ptmu_status ptmu_config_parse(const char* json_text, ptmu_config** out) {
  if (!json_text || !out) return fail(PTMU_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    ptmu::json doc;
    try {
      doc = ptmu::json::parse(json_text);
    } catch (const ptmu::json::parse_error& e) {
      return fail(PTMU_E_VALIDATION, std::string("parse: ") + e.what());
    }
    return parse_into(doc, out);
  });
}

ptmu_status ptmu_config_load(const char* path, ptmu_config** out) {
  if (!path || !out) return fail(PTMU_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return parse_into(ptmu::read_json(path), out); });
}

void ptmu_config_free(ptmu_config* cfg) { delete cfg; }

ptmu_status ptmu_config_json(const ptmu_config* cfg, char** out) {
  if (!cfg || !out) return fail(PTMU_E_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(ptmu::dump_json(ptmu::config_to_json(cfg->cfg)));
    return PTMU_OK;
  });
}

ptmu_status ptmu_validate(const char* json_text, char** report) {
  if (!json_text || !report) return fail(PTMU_E_ARGUMENT, "null argument");
  *report = nullptr;
  return guarded([&] {
    ptmu::json out;
    std::vector<ptmu::Diagnostic> d;
    ptmu::json doc;
    try {
      doc = ptmu::json::parse(json_text);
    } catch (const ptmu::json::parse_error& e) {
      d.push_back({"PARSE_ERROR", "/", e.what()});
    }
    if (d.empty()) d = ptmu::validate(doc);
    out["valid"] = d.empty();
    out["diagnostics"] = ptmu::diagnostics_to_json(d);
    ptmu::json rho = ptmu::json::object();
    if (d.empty()) {
      const ptmu::ExperimentConfig c = ptmu::parse_config(doc);
      for (const auto& t : c.thetas) {
        const auto r = ptmu::support_distance(t.spec.singular, c.space);
        rho[t.label] = r ? ptmu::json(*r) : ptmu::json(nullptr);
      }
    }
    out["rho"] = rho;
    *report = dup(ptmu::dump_json(out));
    if (!d.empty()) return fail(PTMU_E_VALIDATION, d.front().code + " at " + d.front().path + ": " + d.front().message);
    return PTMU_OK;
  });
}

ptmu_status ptmu_run(const ptmu_config* cfg, const char* out_dir, char** report) {
  if (!cfg) return fail(PTMU_E_ARGUMENT, "null config");
  if (report) *report = nullptr;
  return guarded([&] {
    const ptmu::RunResult r = ptmu::run_experiment(cfg->cfg);
    if (out_dir) ptmu::write_files(out_dir, r.files);
    if (report) *report = dup(ptmu::dump_json(r.report));
    if (r.failed) {
      const auto& e = r.report["errors"].front();
      return fail(PTMU_E_NUMERIC, e["stage"].get<std::string>() + ": " + e["message"].get<std::string>());
    }
    return PTMU_OK;
  });
}

ptmu_status ptmu_goldens_check(const char* dir, char** mismatches) {
  if (!dir) return fail(PTMU_E_ARGUMENT, "null directory");
  if (mismatches) *mismatches = nullptr;
  return guarded([&] {
    const auto m = ptmu::goldens_check(dir);
    ptmu::json out = ptmu::json::array();
    for (const auto& x : m) out.push_back({{"file", x.file}, {"detail", x.detail}});
    if (mismatches) *mismatches = dup(ptmu::dump_json(out));
    if (!m.empty()) return fail(PTMU_E_NUMERIC, std::to_string(m.size()) + " golden mismatch(es)");
    return PTMU_OK;
  });
}

ptmu_status ptmu_goldens_update(const char* dir) {
  if (!dir) return fail(PTMU_E_ARGUMENT, "null directory");
  return guarded([&] {
    ptmu::goldens_update(dir);
    return PTMU_OK;
  });
}

const char* ptmu_last_error(void) { return g_last_error.c_str(); }

void ptmu_string_free(char* s) { std::free(s); }

const char* ptmu_version(void) { return "0.1.0"; }

} // extern "C"
