#include "hfb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hfb/errors.hpp"

namespace hfb {

void write_scalar_csv(const ScalarField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF on any host
  if (!out) throw ConfigError("cannot open for writing: " + path);
  const int n = f.grid().n();
  char buf[32];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", f.at(i, j));
      out << buf;
      if (j + 1 < n) out << ',';
    }
    out << '\n';
  }
}

ScalarField read_scalar_csv(const GridSpec& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  ScalarField f(g);
  const int n = g.n();
  std::string line;
  int i = 0;
  while (std::getline(in, line)) {
    if (line.empty() && i == n) break;
    if (i >= n) throw ConfigError(path + ": more rows than grid size " +
                                  std::to_string(n));
    std::stringstream row(line);
    std::string cell;
    int j = 0;
    while (std::getline(row, cell, ',')) {
      if (j >= n) throw ConfigError(path + ": row " + std::to_string(i) +
                                    " has more than " + std::to_string(n) +
                                    " columns");
      try {
        f.at(i, j) = std::stod(cell);
      } catch (const std::exception&) {
        throw ConfigError(path + ": bad number at row " + std::to_string(i) +
                          " col " + std::to_string(j) + ": '" + cell + "'");
      }
      ++j;
    }
    if (j != n) throw ConfigError(path + ": row " + std::to_string(i) +
                                  " has " + std::to_string(j) +
                                  " columns, expected " + std::to_string(n));
    ++i;
  }
  if (i != n) throw ConfigError(path + ": has " + std::to_string(i) +
                                " rows, expected " + std::to_string(n));
  f.clamp_exterior();
  return f;
}

PgmScale write_scalar_pgm(const ScalarField& f, const std::string& path) {
  const GridSpec& g = f.grid();
  const int n = g.n();
  PgmScale sc;
  bool first = true;
  for (int k = 0; k < f.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    if (first || f[k] < sc.min) sc.min = f[k];
    if (first || f[k] > sc.max) sc.max = f[k];
    first = false;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "P2\n" << n << ' ' << n << "\n255\n";
  const double span = sc.max - sc.min;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int v = 0;
      if (!g.exterior(i, j) && span > 0.0)
        v = static_cast<int>(std::lround((f.at(i, j) - sc.min) / span * 255.0));
      out << v;
      out << (j + 1 < n ? ' ' : '\n');
    }
  }
  return sc;
}

}  // namespace hfb
