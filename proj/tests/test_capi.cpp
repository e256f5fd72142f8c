#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "qns/qns.h"

TEST_CASE("configuration errors map to status codes")
{
  qns_config* c = nullptr;
  CHECK(qns_config_parse("[model]\nbogus = 1\n", &c) == QNS_CONFIG_ERROR);
  CHECK(c == nullptr);
  CHECK(std::string(qns_last_error()).find("model.bogus") != std::string::npos);
  CHECK(qns_config_parse(nullptr, &c) == QNS_INVALID_ARGUMENT);
  CHECK(qns_config_load("/nonexistent.ini", &c) == QNS_CONFIG_ERROR);
}

TEST_CASE("a steady run through the C interface")
{
  qns_config* c = nullptr;
  REQUIRE(qns_config_parse("[time]\ndt = 1e-2\nt_final = 0.1\n", &c) == QNS_OK);
  const auto dir = std::filesystem::temp_directory_path() / "qns_capi_test";
  std::filesystem::create_directories(dir);
  CHECK(qns_config_set_output_dir(c, dir.c_str()) == QNS_OK);
  CHECK(qns_config_set_seed(c, 3) == QNS_OK);
  CHECK(qns_run(c, "simulate") == QNS_OK);
  CHECK(std::filesystem::exists(dir / "trajectory.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(qns_run(c, "nonsense") == QNS_CONFIG_ERROR);
  qns_config_free(c);
}

TEST_CASE("frame handle and energies")
{
  qns_frame* f = nullptr;
  REQUIRE(qns_frame_create(1.0, 1.0, 2.0, 1, 6, 0, &f) == QNS_OK);
  double sigma = 0.0;
  int n = 0;
  CHECK(qns_frame_sigma(f, &sigma) == QNS_OK);
  CHECK(qns_frame_size(f, &n) == QNS_OK);
  CHECK(n == 7);
  CHECK(sigma * sigma == doctest::Approx((1.0 + std::sqrt(9.0)) / 4.0));
  std::vector<double> q(n, 0.0), u(n, 0.0), out(6, -1.0);
  q[0] = 1.0;
  u[0] = 0.5;
  const double params[8] = {1.0, 1.0, 0.5, 2.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(qns_frame_energies(f, q.data(), u.data(), params, out.data()) == QNS_OK);
  CHECK(out[0] == doctest::Approx(0.125));
  CHECK(qns_frame_energies(f, q.data(), u.data(), nullptr, out.data()) == QNS_INVALID_ARGUMENT);
  qns_frame_free(f);
  CHECK(qns_frame_create(1.0, 1.0, -2.0, 1, 6, 0, &f) == QNS_INVALID_ARGUMENT);
}

TEST_CASE("tau through the C interface")
{
  double tau = 0.0, tau_dot = 0.0;
  CHECK(qns_tau(1.0, 1.0, 0.5, 0.0, 1e-3, &tau, &tau_dot) == QNS_OK);
  CHECK(tau == 1.0);
  CHECK(qns_tau(1.0, 1.0, 0.5, 1.0, 1e-3, &tau, &tau_dot) == QNS_OK);
  CHECK(tau > 1.0);
  CHECK(tau_dot > 0.0);
  CHECK(qns_tau(1.0, 1.0, 0.5, 1.0, 0.0, &tau, &tau_dot) == QNS_INVALID_ARGUMENT);
}
