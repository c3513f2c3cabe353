/* C interface to the ptmu experiment library. */
#ifndef PTMU_H
#define PTMU_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PTMU_API __declspec(dllexport)
#else
#define PTMU_API __attribute__((visibility("default")))
#endif

typedef struct ptmu_config ptmu_config;

typedef enum ptmu_status {
  PTMU_OK = 0,
  PTMU_E_ARGUMENT = 1,
  PTMU_E_VALIDATION = 2,
  PTMU_E_NUMERIC = 3,
  PTMU_E_IO = 4
} ptmu_status;

/* Parse a config from JSON text or a file. On PTMU_E_VALIDATION the
   diagnostics are available from ptmu_last_error() as a JSON array. */
PTMU_API ptmu_status ptmu_config_parse(const char* json_text, ptmu_config** out);
PTMU_API ptmu_status ptmu_config_load(const char* path, ptmu_config** out);
PTMU_API void ptmu_config_free(ptmu_config* cfg);

/* Canonical JSON of a parsed config. Free with ptmu_string_free. */
PTMU_API ptmu_status ptmu_config_json(const ptmu_config* cfg, char** out);

/* Validation report {"valid", "diagnostics", "rho"} for JSON text. Returns
   PTMU_E_VALIDATION when diagnostics are present; *report is set either way. */
PTMU_API ptmu_status ptmu_validate(const char* json_text, char** report);

/* Runs the experiment. With a non-null out_dir the CSV files and report.json
   are written there atomically. *report (optional) receives the JSON report. */
PTMU_API ptmu_status ptmu_run(const ptmu_config* cfg, const char* out_dir, char** report);

/* Golden-file regression over <dir>/manifest.json. *mismatches receives a
   JSON array; PTMU_E_NUMERIC when it is nonempty. */
PTMU_API ptmu_status ptmu_goldens_check(const char* dir, char** mismatches);
PTMU_API ptmu_status ptmu_goldens_update(const char* dir);

/* Message of the last failure on this thread; empty when none. */
PTMU_API const char* ptmu_last_error(void);
PTMU_API void ptmu_string_free(char* s);
PTMU_API const char* ptmu_version(void);

#ifdef __cplusplus
}
#endif

#endif
