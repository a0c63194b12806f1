#pragma once

#include <string>

#include "hfb/field.hpp"

namespace hfb {

/// Min/max used when normalizing a field to 8-bit PGM; recorded in reports.
struct PgmScale {
  double min = 0.0;
  double max = 0.0;
};

/// Row-major CSV, n rows by n columns, "%.17g" (round-trips doubles), LF.
void write_scalar_csv(const ScalarField& f, const std::string& path);

/// Read a field written by write_scalar_csv; throws ConfigError when the
/// file cannot be read or its shape does not match the grid.
ScalarField read_scalar_csv(const GridSpec& g, const std::string& path);

/// ASCII PGM (P2), min-max normalized over non-exterior nodes to 0..255.
PgmScale write_scalar_pgm(const ScalarField& f, const std::string& path);

}  // namespace hfb
