#include "jamopt/model.hpp"

#include <cmath>
#include <sstream>

#include "jamopt/errors.hpp"

namespace jamopt {

namespace {

void require_open_unit(std::string_view name, double value) {
  if (!(value > 0.0 && value < 1.0)) {
    std::ostringstream msg;
    msg << "must lie in the open interval (0, 1), got " << value;
    throw DomainError(std::string(name), msg.str());
  }
}

}  // namespace

std::string_view to_string(Metric metric) {
  return metric == Metric::AoI ? "aoi" : "aoii";
}

std::optional<Metric> parse_metric(std::string_view text) {
  if (text == "aoi" || text == "AoI") return Metric::AoI;
  if (text == "aoii" || text == "AoII") return Metric::AoII;
  return std::nullopt;
}

SystemParams SystemParams::with_lambda(double new_lambda) const {
  return validate_params(p, q, r, new_lambda);
}

SystemParams validate_params(double p, double q, double r, double lambda,
                             const WarningSink& warn) {
  require_open_unit("p", p);
  require_open_unit("q", q);
  if (!(r > 0.0 && r <= 0.5)) {
    std::ostringstream msg;
    msg << "must lie in (0, 1/2], got " << r;
    throw DomainError("r", msg.str());
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "must be a finite value > 0, got " << lambda;
    throw DomainError("lambda", msg.str());
  }
  if (r == 0.5 && warn) {
    warn("r = 1/2 is on the boundary of the admissible range; threshold structure "
         "still holds but the AoII chain has a = b");
  }
  return SystemParams{p, q, r, lambda};
}

ChainParams validate_chain(double a, double b, double c) {
  require_open_unit("a", a);
  require_open_unit("b", b);
  require_open_unit("c", c);
  if (a > b) throw DomainError("a", "must not exceed b");
  if (!(c > b)) throw DomainError("c", "must exceed b");
  return ChainParams{a, b, c};
}

ChainParams to_chain(const SystemParams& params, Metric metric) {
  const double p = params.p;
  const double q = params.q;
  const double r = params.r;
  if (metric == Metric::AoI) {
    return ChainParams{1.0 - p, 1.0 - p, q + (1.0 - p) * (1.0 - q)};
  }
  return ChainParams{(1.0 - p) * r, (1.0 - p) * (1.0 - r),
                     p * q * (1.0 - r) + (1.0 - p) * (1.0 - r)};
}

double increment_prob(const SystemParams& params, Metric metric, bool at_zero, Action action) {
  const double p = params.p;
  const double q = params.q;
  const double r = params.r;
  const bool active = action == Action::Active;
  if (metric == Metric::AoI) {
    return active ? q + (1.0 - q) * (1.0 - p) : 1.0 - p;
  }
  if (at_zero) {
    return active ? p * q * r + (1.0 - p) * r : (1.0 - p) * r;
  }
  return active ? p * q * (1.0 - r) + (1.0 - p) * (1.0 - r) : (1.0 - p) * (1.0 - r);
}

IncrementKernel make_kernel(const SystemParams& params, Metric metric) {
  return IncrementKernel{
      increment_prob(params, metric, true, Action::Passive),
      increment_prob(params, metric, true, Action::Active),
      increment_prob(params, metric, false, Action::Passive),
      increment_prob(params, metric, false, Action::Active),
  };
}

}  // namespace jamopt
