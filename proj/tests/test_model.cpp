#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "jamopt/errors.hpp"
#include "jamopt/model.hpp"

using namespace jamopt;

namespace {

const std::vector<double> kGrid{0.1, 0.3, 0.5, 0.7, 0.9};
const std::vector<double> kRGrid{0.1, 0.25, 0.4, 0.5};

std::string field_of(double p, double q, double r, double lambda) {
  try {
    validate_params(p, q, r, lambda);
  } catch (const DomainError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("validate_params accepts the open ranges and names the bad field") {
  CHECK(field_of(0.5, 0.5, 0.25, 1.0).empty());
  CHECK(field_of(0.0, 0.5, 0.25, 1.0) == "p");
  CHECK(field_of(1.0, 0.5, 0.25, 1.0) == "p");
  CHECK(field_of(0.5, 0.0, 0.25, 1.0) == "q");
  CHECK(field_of(0.5, 1.0, 0.25, 1.0) == "q");
  CHECK(field_of(0.5, 0.5, 0.0, 1.0) == "r");
  CHECK(field_of(0.5, 0.5, 0.51, 1.0) == "r");
  CHECK(field_of(0.5, 0.5, 0.25, 0.0) == "lambda");
  CHECK(field_of(0.5, 0.5, 0.25, -1.0) == "lambda");
  CHECK(field_of(0.5, 0.5, 0.25, INFINITY) == "lambda");
  CHECK(field_of(NAN, 0.5, 0.25, 1.0) == "p");
  CHECK(field_of(0.5, 0.5, NAN, 1.0) == "r");
}

TEST_CASE("r = 1/2 is admitted with a single warning") {
  int warnings = 0;
  const auto sink = [&warnings](std::string_view) { ++warnings; };
  const SystemParams params = validate_params(0.1, 0.5, 0.5, 1.0, sink);
  CHECK(params.r == 0.5);
  CHECK(warnings == 1);
  validate_params(0.1, 0.5, 0.4, 1.0, sink);
  CHECK(warnings == 1);
  CHECK_NOTHROW(validate_params(0.1, 0.5, 0.5, 1.0));
}

TEST_CASE("with_lambda revalidates") {
  const SystemParams params = validate_params(0.5, 0.5, 0.25, 1.0);
  CHECK(params.with_lambda(3.0).lambda == 3.0);
  CHECK(params.with_lambda(3.0).p == 0.5);
  CHECK_THROWS_AS(params.with_lambda(0.0), DomainError);
}

TEST_CASE("metric names round-trip") {
  CHECK(to_string(Metric::AoI) == "aoi");
  CHECK(to_string(Metric::AoII) == "aoii");
  CHECK(parse_metric("aoi") == Metric::AoI);
  CHECK(parse_metric("aoii") == Metric::AoII);
  CHECK_FALSE(parse_metric("age").has_value());
}

TEST_CASE("validate_chain ordering") {
  CHECK_NOTHROW(validate_chain(0.5, 0.5, 0.75));
  CHECK_NOTHROW(validate_chain(0.125, 0.375, 0.5625));
  CHECK_THROWS_AS(validate_chain(0.6, 0.5, 0.75), DomainError);
  CHECK_THROWS_AS(validate_chain(0.5, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(validate_chain(0.5, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(validate_chain(0.0, 0.5, 0.75), DomainError);
}

TEST_CASE("scenario 1 chains") {
  const SystemParams params = validate_params(0.5, 0.5, 0.25, 1.0);
  const ChainParams aoi = to_chain(params, Metric::AoI);
  CHECK(aoi.a == 0.5);
  CHECK(aoi.b == 0.5);
  CHECK(aoi.c == 0.75);
  const ChainParams aoii = to_chain(params, Metric::AoII);
  CHECK(aoii.a == 0.125);
  CHECK(aoii.b == 0.375);
  CHECK(aoii.c == 0.5625);
  CHECK(increment_prob(params, Metric::AoII, true, Action::Active) == doctest::Approx(0.1875));
}

TEST_CASE("kernel matches the chain mapping on the parameter grid") {
  for (Metric metric : {Metric::AoI, Metric::AoII}) {
    for (double p : kGrid) {
      for (double q : kGrid) {
        for (double r : kRGrid) {
          const SystemParams params = validate_params(p, q, r, 1.0);
          const ChainParams chain = to_chain(params, metric);
          CAPTURE(p);
          CAPTURE(q);
          CAPTURE(r);
          CHECK_NOTHROW(validate_chain(chain.a, chain.b, chain.c));
          CHECK(increment_prob(params, metric, false, Action::Passive) == chain.b);
          CHECK(increment_prob(params, metric, true, Action::Passive) == chain.a);
          CHECK(increment_prob(params, metric, false, Action::Active) == chain.c);
          // Active out of state 0 is a c / b for both metrics.
          const double zero_active = increment_prob(params, metric, true, Action::Active);
          CHECK(std::abs(zero_active - chain.a * chain.c / chain.b) <= 1e-15);
          const double gap = metric == Metric::AoI ? p * q : p * q * (1.0 - r);
          CHECK(std::abs((chain.c - chain.b) - gap) <= 1e-15);
          if (metric == Metric::AoI) CHECK(chain.a == chain.b);

          const IncrementKernel kernel = make_kernel(params, metric);
          for (bool at_zero : {true, false}) {
            for (Action action : {Action::Passive, Action::Active}) {
              CHECK(kernel.at(at_zero, action) == increment_prob(params, metric, at_zero, action));
            }
          }
          CHECK(kernel.at(0L, Action::Active) == kernel.zero_active);
          CHECK(kernel.at(7L, Action::Passive) == kernel.positive_passive);
        }
      }
    }
  }
}

TEST_CASE("physical derivation of the AoII increments") {
  // Enumerate source flip, channel and jam outcomes directly.
  const double p = 0.3;
  const double q = 0.7;
  const double r = 0.4;
  const SystemParams params = validate_params(p, q, r, 1.0);
  for (bool at_zero : {true, false}) {
    for (Action action : {Action::Passive, Action::Active}) {
      double up = 0.0;
      for (int flip = 0; flip < 2; ++flip) {
        for (int channel = 0; channel < 2; ++channel) {
          for (int jam = 0; jam < 2; ++jam) {
            double prob = (flip ? r : 1 - r) * (channel ? p : 1 - p);
            if (action == Action::Active) {
              prob *= jam ? q : 1 - q;
            } else if (jam) {
              continue;
            }
            const bool delivered = channel && !jam;
            // Before the slot the estimate is correct iff the age is 0.
            const bool wrong_before = !at_zero;
            const bool wrong_source = wrong_before != static_cast<bool>(flip);
            const bool wrong_after = delivered ? false : wrong_source;
            if (wrong_after) up += prob;
          }
        }
      }
      CHECK(increment_prob(params, Metric::AoII, at_zero, action) == doctest::Approx(up).epsilon(1e-14));
    }
  }
}
