#include "hfb/operators.hpp"

#include <cmath>
#include <random>

#include "hfb/errors.hpp"

namespace hfb {

OperatorSpec make_operator(OperatorVariant v, double lambda, double eta) {
  if (!(lambda >= 1.0))
    throw ConfigError("operator lambda must be >= 1, got " +
                      std::to_string(lambda));
  if (!(eta >= 0.0))
    throw ConfigError("operator eta must be >= 0, got " + std::to_string(eta));
  return OperatorSpec{v, lambda, eta};
}

OperatorVariant operator_variant_from_string(const std::string& s) {
  if (s == "smoothed-frobenius") return OperatorVariant::SmoothedFrobenius;
  if (s == "scaled-frobenius") return OperatorVariant::ScaledFrobenius;
  if (s == "linear-trace") return OperatorVariant::LinearTrace;
  throw ConfigError("unknown operator variant: '" + s + "'");
}

std::string to_string(OperatorVariant v) {
  switch (v) {
    case OperatorVariant::SmoothedFrobenius: return "smoothed-frobenius";
    case OperatorVariant::ScaledFrobenius: return "scaled-frobenius";
    case OperatorVariant::LinearTrace: return "linear-trace";
  }
  return "?";
}

double f_eval(const OperatorSpec& spec, const SymMat2& M) {
  switch (spec.variant) {
    case OperatorVariant::SmoothedFrobenius:
    case OperatorVariant::ScaledFrobenius: {
      const double f2 = frob2(M);
      if (f2 == 0.0) return 0.0;  // exact zero at the origin by contract
      const double v = std::sqrt(f2 + spec.eta * spec.eta) - spec.eta;
      return spec.variant == OperatorVariant::ScaledFrobenius ? spec.lambda * v
                                                              : v;
    }
    case OperatorVariant::LinearTrace:
      return M.xx + M.yy;
  }
  return 0.0;
}

SymMat2 f_grad(const OperatorSpec& spec, const SymMat2& M) {
  switch (spec.variant) {
    case OperatorVariant::SmoothedFrobenius:
    case OperatorVariant::ScaledFrobenius: {
      const double denom = std::sqrt(frob2(M) + spec.eta * spec.eta);
      if (denom == 0.0)
        throw SingularPointError(
            "f_grad at the norm kink (eta = 0, M = 0); smooth with eta > 0");
      const double c =
          (spec.variant == OperatorVariant::ScaledFrobenius ? spec.lambda
                                                            : 1.0) /
          denom;
      return {c * M.xx, c * M.xy, c * M.yy};
    }
    case OperatorVariant::LinearTrace:
      return {1.0, 0.0, 1.0};
  }
  return {};
}

namespace {

// shared slack for exact inequalities evaluated in floating point
inline double fp_slack(double scale) { return 1e-9 * (1.0 + scale); }

}  // namespace

AxiomReport axiom_sampler(const OperatorSpec& spec, Axiom which, long trials,
                          std::uint64_t seed) {
  if (trials < 1) throw ConfigError("axiom_sampler needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> logmag(-3.0, 3.0);
  auto rand_sym = [&]() -> SymMat2 {
    const double s = std::pow(10.0, logmag(rng));
    return {s * uni(rng), s * uni(rng), s * uni(rng)};
  };
  auto rand_psd = [&]() -> SymMat2 {
    // N = A^T A  with random square factor, same magnitude family
    const double s = std::pow(10.0, logmag(rng));
    const double a = s * uni(rng), b = s * uni(rng), c = s * uni(rng),
                 d = s * uni(rng);
    return {a * a + c * c, a * b + c * d, b * b + d * d};
  };

  AxiomReport rep;
  rep.which = which;
  rep.trials = trials;
  rep.seed = seed;
  for (long t = 0; t < trials; ++t) {
    double violation = 0.0;
    switch (which) {
      case Axiom::A1: {
        const SymMat2 M = rand_sym();
        const SymMat2 N = rand_psd();
        const double diff = f_eval(spec, M + N) - f_eval(spec, M);
        const double nn = frob(N);
        const double slack =
            fp_slack(nn + std::abs(f_eval(spec, M)) + std::abs(diff));
        violation = std::max(nn / spec.lambda - diff - slack,
                             diff - spec.lambda * nn - slack);
        break;
      }
      case Axiom::A2: {
        const SymMat2 M = rand_sym();
        const SymMat2 N = rand_sym();
        const double lhs = f_eval(spec, 0.5 * (M + N));
        const double rhs = 0.5 * (f_eval(spec, M) + f_eval(spec, N));
        violation = lhs - rhs - fp_slack(std::abs(lhs) + std::abs(rhs));
        break;
      }
      case Axiom::A3: {
        const SymMat2 M = rand_sym();
        const double v = f_eval(spec, M);
        const double nm = frob(M);
        const double slack = spec.eta + fp_slack(nm + std::abs(v));
        violation = std::max(nm / spec.lambda - v - slack,
                             v - spec.lambda * nm - slack);
        break;
      }
    }
    if (violation <= 0.0) {
      ++rep.passes;
    } else {
      rep.worst_violation = std::max(rep.worst_violation, violation);
    }
  }
  rep.pass_rate = static_cast<double>(rep.passes) / trials;
  return rep;
}

}  // namespace hfb
