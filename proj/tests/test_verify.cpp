#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "muskat/verify.hpp"

using namespace muskat;

namespace {

const CheckReport& find(const std::vector<CheckReport>& v, const std::string& name) {
  static CheckReport missing;
  for (const auto& r : v)
    if (r.name == name) return r;
  REQUIRE_MESSAGE(false, "missing report: ", name);
  return missing;
}

}  // namespace

TEST_CASE("eps kernel tables integrate exactly against linear data") {
  EpsKernelTable tab(256, 1e-3);
  std::vector<double> lin(257);
  for (int i = 0; i <= 256; ++i) lin[i] = 0.3 + 0.2 * (kPi * i / 256.0);
  std::vector<double> got = tab.apply_smooth(lin);
  for (int i : {40, 128, 200}) {
    const double a = kPi * i / 256.0;
    const double e = 1e-3;
    auto I0 = [&](double u) { return std::atan(u / e) / e; };
    auto I1 = [&](double u) { return 0.5 * std::log(u * u + e * e); };
    // b = a - u: integrand (0.3 + 0.2(a-u)) k(u), u from a-pi to a
    const double exact = (0.3 + 0.2 * a) * (I0(a) - I0(a - kPi)) - 0.2 * (I1(a) - I1(a - kPi));
    CHECK(got[i] == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("garding suite passes and is deterministic") {
  std::vector<double> eps_list = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<CheckReport> a = run_garding_suite(12, 256, eps_list, 7);
  for (const auto& r : a) {
    INFO(r.name, " measured=", r.measured, " params=", r.params);
    CHECK(r.pass);
  }
  std::vector<CheckReport> b = run_garding_suite(12, 256, eps_list, 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].measured == b[i].measured);  // bit-for-bit reproducible
  }
  const CheckReport& fac4 = find(a, "garding_pointwise_factor4");
  CHECK(fac4.measured <= 1e-12);
}

TEST_CASE("identity suite") {
  std::vector<CheckReport> reps = run_identity_suite(512, {});
  for (const auto& r : reps) {
    INFO(r.name, " measured=", r.measured, " bound=", r.bound);
    CHECK(r.pass);
  }
  CHECK(find(reps, "identity_integralcancel").measured < 1e-10);
  CHECK(find(reps, "identity_hilbert_involution").measured < 1e-12);
}

TEST_CASE("limit suite rates sit near one") {
  std::vector<CheckReport> reps = run_limit_suite({});
  for (const auto& r : reps) {
    INFO(r.name, " measured=", r.measured, " params=", r.params);
    CHECK(r.pass);
  }
  CHECK(find(reps, "limit_b_zero_order").measured == 0.0);
}

TEST_CASE("kernel limit suite") {
  std::vector<CheckReport> reps = run_kernel_limit_suite(3, 256, 11);
  for (const auto& r : reps) {
    INFO(r.name, " measured=", r.measured);
    CHECK(r.pass);
  }
  CHECK(find(reps, "kernel_limit_diag45_value").measured < 1e-12);
}

TEST_CASE("json rendering and failure counting") {
  std::vector<CheckReport> reps = {{"alpha", 1.0, 2.0, true, "p"}, {"beta", 3.0, 2.0, false, ""}};
  CHECK(count_failures(reps) == 1);
  const std::string json = render_check_json(reps);
  CHECK(json.find("\"failed\": 1") != std::string::npos);
  CHECK(json.find("alpha") != std::string::npos);
}
