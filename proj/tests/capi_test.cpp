// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "qdf/qdf.h"

namespace {
const std::string kData = QDF_TEST_DATA;

bool contains(const char* haystack, const char* needle) { return std::strstr(haystack, needle) != nullptr; }
}  // namespace

TEST_CASE("operators") {
  CHECK(std::strlen(qdf_version()) > 0);
  const int legs[] = {2, 2};
  const double re[16] = {0.25, 0, 0, 0, 0, 0.25, 0, 0, 0, 0, 0.25, 0, 0, 0, 0, 0.25};
  qdf_operator* x = nullptr;
  REQUIRE(qdf_operator_create(legs, 2, re, nullptr, &x) == QDF_OK);
  double v = 0.0;
  REQUIRE(qdf_ppt_min_eig(x, &v) == QDF_OK);
  CHECK(v == doctest::Approx(0.25));
  int psd = 0;
  REQUIRE(qdf_operator_is_psd(x, 1e-9, &psd) == QDF_OK);
  CHECK(psd == 1);

  int got[4] = {0};
  size_t count = 0;
  REQUIRE(qdf_operator_legs(x, got, 1, &count) == QDF_OK);
  CHECK(count == 2);
  CHECK(got[0] == 2);

  qdf_operator* xx = nullptr;
  REQUIRE(qdf_operator_tensor(x, x, &xx) == QDF_OK);
  REQUIRE(qdf_operator_legs(xx, got, 4, &count) == QDF_OK);
  CHECK(count == 4);

  char* json = nullptr;
  REQUIRE(qdf_operator_to_json(x, &json) == QDF_OK);
  CHECK(contains(json, "\"legs\""));
  qdf_operator* back = nullptr;
  CHECK(qdf_operator_from_json(json, &back) == QDF_OK);
  qdf_string_free(json);
  qdf_operator_free(back);
  qdf_operator_free(xx);
  qdf_operator_free(x);
}

TEST_CASE("errors map to status codes") {
  qdf_operator* x = nullptr;
  CHECK(qdf_operator_from_json("{", &x) == QDF_ERR_PARSE);
  CHECK(std::strlen(qdf_last_error()) > 0);
  CHECK(x == nullptr);
  // Row count disagrees with the declared legs: a layout error.
  CHECK(qdf_operator_load((kData + "/bad_legs.json").c_str(), &x) == QDF_ERR_PARSE);
  CHECK(contains(qdf_last_error(), "rows"));
  CHECK(qdf_operator_load((kData + "/not_psd.json").c_str(), &x) == QDF_OK);
  qdf_functional* trace = nullptr;
  REQUIRE(qdf_functional_preset("trace", 2, 0, &trace) == QDF_OK);
  qdf_verdict verdict;
  CHECK(qdf_extend_check(x, trace, 2, nullptr, 0, &verdict, nullptr) == QDF_ERR_INVALID_ARGUMENT);
  qdf_functional_free(trace);
  qdf_operator_free(x);
  x = nullptr;
  CHECK(qdf_werner_state(2.0, &x) == QDF_ERR_INVALID_ARGUMENT);
  CHECK(qdf_operator_create(nullptr, 0, nullptr, nullptr, &x) != QDF_OK);

  qdf_functional* rho = nullptr;
  CHECK(qdf_functional_preset("uniform", 2, 0, &rho) == QDF_ERR_INVALID_ARGUMENT);

  // Complex rho(t) is outside the domain of the boundary report.
  const int legs[] = {2};
  const double re[4] = {0, 0, 0, 0};
  const double im[4] = {1, 0, 0, 1};
  qdf_operator* t = nullptr;
  REQUIRE(qdf_operator_create(legs, 1, re, im, &t) == QDF_OK);
  REQUIRE(qdf_functional_preset("trace", 2, 0, &rho) == QDF_OK);
  char* report = nullptr;
  REQUIRE(qdf_boundary_grouplike(t, rho, 2, nullptr, 0, &report) == QDF_OK);
  CHECK(contains(report, "e_rho_error"));
  qdf_string_free(report);
  qdf_operator_free(t);
  qdf_functional_free(rho);
}

TEST_CASE("hierarchy through the C interface") {
  qdf_operator* bell = nullptr;
  REQUIRE(qdf_operator_load((kData + "/bell.json").c_str(), &bell) == QDF_OK);
  qdf_functional* rho = nullptr;
  REQUIRE(qdf_functional_preset("trace", 2, 0, &rho) == QDF_OK);
  qdf_verdict verdict = QDF_UNDETERMINED;
  char* report = nullptr;
  REQUIRE(qdf_extend_check(bell, rho, 2, nullptr, 0, &verdict, &report) == QDF_OK);
  CHECK(verdict == QDF_ENTANGLED_EVIDENCE);
  CHECK(contains(report, "infeasible_at_tolerance"));
  qdf_string_free(report);

  qdf_operator* product = nullptr;
  REQUIRE(qdf_operator_load((kData + "/product.json").c_str(), &product) == QDF_OK);
  qdf_solver_options opts;
  qdf_solver_options_default(&opts);
  CHECK(opts.tol == doctest::Approx(1e-7));
  REQUIRE(qdf_extend_check(product, rho, 3, &opts, 1, &verdict, nullptr) == QDF_OK);
  CHECK(verdict == QDF_SEPARABLE_EVIDENCE);

  opts.relation = QDF_RELATION_SUB;
  REQUIRE(qdf_extension_feasibility(bell, rho, 2, &opts, &report) == QDF_OK);
  CHECK(contains(report, "\"feasible\""));
  qdf_string_free(report);

  qdf_operator_free(product);
  qdf_operator_free(bell);
  qdf_functional_free(rho);
}

TEST_CASE("boundary and tables") {
  qdf_operator* t = nullptr;
  REQUIRE(qdf_operator_load((kData + "/t_half.json").c_str(), &t) == QDF_OK);
  qdf_functional* rho = nullptr;
  REQUIRE(qdf_functional_preset("trace", 2, 0, &rho) == QDF_OK);
  char* report = nullptr;
  REQUIRE(qdf_boundary_grouplike(t, rho, 4, nullptr, 1, &report) == QDF_OK);
  CHECK(contains(report, "\"is_exponential\":true"));
  CHECK(contains(report, "\"subharmonic\":true"));
  qdf_string_free(report);

  REQUIRE(qdf_schur_table(2, 3, &report) == QDF_OK);
  CHECK(contains(report, "\"multiplicity\":2"));
  qdf_string_free(report);
  CHECK(qdf_schur_table(2, 20, &report) == QDF_ERR_INVALID_ARGUMENT);

  qdf_operator_free(t);
  qdf_functional_free(rho);
}
