#pragma once

// "kme-probe v1" text files.
//
//   # kme-probe v1
//   dims: d1 ... dn
//   x 1: re im re im ...      (d_1 complex entries)
//   xp 1: re im ...
//   ...
//
// A probe-pair file adds "y i:" lines. Its flips are implied (x'_i = y_i,
// y'_i = x_i), so "xp" lines may be omitted; when present they must equal y.
// Site numbers are 1-based.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kme/bounds.hpp"

namespace kme {

struct ProbeFile {
  SystemShape shape;
  std::vector<CVector> x;
  std::optional<std::vector<CVector>> xp;
  std::optional<std::vector<CVector>> y;

  bool is_pair() const { return y.has_value(); }
  /// Throws InputError if the file carries no usable flips.
  Probe probe() const;
  /// Throws InputError if the file has no y lines.
  ProbePair pair() const;
};

ProbeFile read_probe(std::istream& in);
ProbeFile read_probe_file(const std::string& path);

void write_probe(std::ostream& out, const Probe& probe);
void write_probe_pair(std::ostream& out, const ProbePair& pair);

}  // namespace kme
