#pragma once

#include <cstdint>
#include <string>

#include "hfb/field.hpp"

namespace hfb {

enum class OperatorVariant : std::uint8_t {
  SmoothedFrobenius,  // F(M) = sqrt(|M|_F^2 + eta^2) - eta
  ScaledFrobenius,    // F(M) = lambda * (sqrt(|M|_F^2 + eta^2) - eta)
  LinearTrace,        // F(M) = tr M   (A1-compliant, fails A3 by design)
};

/// Operator family parameters.  lambda is the ellipticity/growth constant
/// (>= 1), eta the smoothing width (>= 0, matrix-norm units).
struct OperatorSpec {
  OperatorVariant variant = OperatorVariant::SmoothedFrobenius;
  double lambda = 1.0;
  double eta = 1e-3;
};

/// Validates lambda >= 1, eta >= 0; throws ConfigError otherwise.
OperatorSpec make_operator(OperatorVariant v, double lambda, double eta);

OperatorVariant operator_variant_from_string(const std::string& s);
std::string to_string(OperatorVariant v);

/// Operator value; exactly 0 at M = 0 for every variant.
double f_eval(const OperatorSpec& spec, const SymMat2& M);

/// Matrix of partials dF/dM_ij (full-matrix convention: contract() pairs the
/// cross entry twice).  Throws SingularPointError at the eta = 0 kink.
SymMat2 f_grad(const OperatorSpec& spec, const SymMat2& M);

enum class Axiom : std::uint8_t { A1, A2, A3 };

struct AxiomReport {
  Axiom which = Axiom::A1;
  long trials = 0;
  long passes = 0;
  double pass_rate = 0.0;
  double worst_violation = 0.0;  // largest inequality breach seen, 0 if none
  std::uint64_t seed = 0;
};

/// Randomized check of A1 (uniform ellipticity over N >= 0), A2 (midpoint
/// convexity) or A3 (growth).  Matrices have uniform [-1,1] entries scaled by
/// a random magnitude in [1e-3, 1e3]; deterministic given the seed.
/// Violations are reported, never thrown.  A3 allows an additive eta slack
/// for the smoothed variants.
AxiomReport axiom_sampler(const OperatorSpec& spec, Axiom which, long trials,
                          std::uint64_t seed);

}  // namespace hfb
