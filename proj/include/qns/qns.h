#ifndef QNS_QNS_H
#define QNS_QNS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QNS_API __declspec(dllexport)
#else
#define QNS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Return codes. The first four double as process exit codes of the qns tool. */
typedef enum qns_status {
  QNS_OK = 0,
  QNS_AUDIT_VIOLATION = 1,
  QNS_SOLVER_FAILURE = 2,
  QNS_CONFIG_ERROR = 3,
  QNS_INVALID_ARGUMENT = 4
} qns_status;

typedef struct qns_config qns_config;
typedef struct qns_frame qns_frame;

QNS_API const char* qns_version(void);

/* Message describing the most recent failure on the calling thread. */
QNS_API const char* qns_last_error(void);

QNS_API int qns_config_load(const char* path, qns_config** out);
QNS_API int qns_config_parse(const char* text, qns_config** out);
QNS_API int qns_config_set_output_dir(qns_config* config, const char* dir);
QNS_API int qns_config_set_seed(qns_config* config, uint64_t seed);
QNS_API void qns_config_free(qns_config* config);

/* mode is one of "simulate", "verify", "sweep", "rescaled". Artifacts are written to the
 * configured output directory; the return value is the exit status of the run. */
QNS_API int qns_run(const qns_config* config, const char* mode);

/* Hermite frame of the reference Gaussian; quad_order = 0 selects 2*degree+4. */
QNS_API int qns_frame_create(double a, double kappa, double lambda, int dim, int degree, int quad_order,
                             qns_frame** out);
QNS_API void qns_frame_free(qns_frame* frame);
QNS_API int qns_frame_sigma(const qns_frame* frame, double* sigma);
QNS_API int qns_frame_size(const qns_frame* frame, int* size);

/* Regularized energy and BD entropy of (q, u). q has size() coefficients, u holds dim columns of
 * size() coefficients each. params = {a, kappa, nu, lambda, r0, r1, r4, delta1}.
 * out receives {E_reg, D_reg, R_reg, E_BD, D_BD, R_BD}. */
QNS_API int qns_frame_energies(const qns_frame* frame, const double* q, const double* u, const double* params,
                               double* out);

/* tau(t_final) and tau'(t_final) for tau'' = a/tau + kappa^2/tau^3 - 2 nu tau'/tau^2, tau(0) = 1, tau'(0) = 0. */
QNS_API int qns_tau(double a, double kappa, double nu, double t_final, double dt, double* tau, double* tau_dot);

#ifdef __cplusplus
}
#endif

#endif
