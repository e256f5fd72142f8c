#include "qns/qns.h"

#include <string>

#include "qns/app.hpp"
#include "qns/rescaled.hpp"

struct qns_config
{
  qns::RunConfig config;
};

struct qns_frame
{
  qns::FramePtr frame;
};

namespace {

thread_local std::string last_error;

int fail(int code, const std::string& msg)
{
  last_error = msg;
  return code;
}

int code_of(const qns::Error& e)
{
  switch (e.kind()) {
    case qns::ErrorKind::Config:
      return QNS_CONFIG_ERROR;
    case qns::ErrorKind::InvalidParameter:
    case qns::ErrorKind::Dimension:
      return QNS_INVALID_ARGUMENT;
    default:
      return QNS_SOLVER_FAILURE;
  }
}

template <class F>
int guarded(F&& f)
{
  try {
    last_error.clear();
    return f();
  } catch (const qns::Error& e) {
    return fail(code_of(e), e.what());
  } catch (const std::exception& e) {
    return fail(QNS_SOLVER_FAILURE, e.what());
  }
}

}  // namespace

extern "C" {

const char* qns_version(void)
{
  return "1.0.0";
}

const char* qns_last_error(void)
{
  return last_error.c_str();
}

int qns_config_load(const char* path, qns_config** out)
{
  if (!path || !out)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new qns_config{qns::load_config(path)};
    return QNS_OK;
  });
}

int qns_config_parse(const char* text, qns_config** out)
{
  if (!text || !out)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new qns_config{qns::parse_config(text)};
    return QNS_OK;
  });
}

int qns_config_set_output_dir(qns_config* config, const char* dir)
{
  if (!config || !dir)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  config->config.output_dir = dir;
  return QNS_OK;
}

int qns_config_set_seed(qns_config* config, uint64_t seed)
{
  if (!config)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  config->config.seed = seed;
  return QNS_OK;
}

void qns_config_free(qns_config* config)
{
  delete config;
}

int qns_run(const qns_config* config, const char* mode)
{
  if (!config || !mode)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  qns::AppOutcome o = qns::run_mode(config->config, mode);
  last_error = o.message;
  return o.exit_code;
}

int qns_frame_create(double a, double kappa, double lambda, int dim, int degree, int quad_order, qns_frame** out)
{
  if (!out)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new qns_frame{qns::Frame::build(a, kappa, lambda, dim, degree, quad_order)};
    return QNS_OK;
  });
}

void qns_frame_free(qns_frame* frame)
{
  delete frame;
}

int qns_frame_sigma(const qns_frame* frame, double* sigma)
{
  if (!frame || !sigma)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  *sigma = frame->frame->sigma();
  return QNS_OK;
}

int qns_frame_size(const qns_frame* frame, int* size)
{
  if (!frame || !size)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  *size = frame->frame->size();
  return QNS_OK;
}

int qns_frame_energies(const qns_frame* frame, const double* q, const double* u, const double* params, double* out)
{
  if (!frame || !q || !u || !params || !out)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const qns::FramePtr& f = frame->frame;
    const int n = f->size(), d = f->dim();
    qns::ScalarField qf{f, Eigen::Map<const Eigen::VectorXd>(q, n)};
    qns::VectorField uf{f, Eigen::Map<const Eigen::MatrixXd>(u, n, d)};
    qns::ModelParams p{params[0], params[1], params[2], params[3], params[4], params[5], params[6], params[7]};
    p.validate();
    qns::FieldIntegrals fi = qns::field_integrals(qf, uf);
    qns::EnergyTriple e = qns::energy(fi, p, f->sigma(), d);
    qns::EnergyTriple b = qns::bd_entropy(fi, p, f->sigma(), d);
    const double vals[6] = {e.E, e.D, e.R, b.E, b.D, b.R};
    for (int i = 0; i < 6; ++i)
      out[i] = vals[i];
    return QNS_OK;
  });
}

int qns_tau(double a, double kappa, double nu, double t_final, double dt, double* tau, double* tau_dot)
{
  if (!tau || !tau_dot)
    return fail(QNS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (!(dt > 0.0) || !(t_final >= 0.0))
      throw qns::Error(qns::ErrorKind::InvalidParameter, "dt must be positive and t_final non-negative");
    qns::TauParams p{a, kappa, nu};
    qns::TauState s;
    const long steps = std::lround(t_final / dt);
    for (long k = 0; k < steps; ++k)
      s = qns::tau_rk4(s, p, dt);
    *tau = s.tau;
    *tau_dot = s.tau_dot;
    return QNS_OK;
  });
}

}  // extern "C"
