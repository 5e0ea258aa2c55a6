#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testfix {

struct FixtureCurve {
  long N;
  std::string iso;
  int index;
  std::array<long, 5> a;
  int rank;
  int torsion;
};

inline std::vector<FixtureCurve> load_curves(const std::string& path = "tests/data/curves.txt") {
  std::vector<FixtureCurve> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    FixtureCurve c;
    ls >> c.N >> c.iso >> c.index >> c.a[0] >> c.a[1] >> c.a[2] >> c.a[3] >> c.a[4] >> c.rank >> c.torsion;
    out.push_back(c);
  }
  return out;
}

// p + 1 - #E(F_p) by brute force over the affine model plus the point at infinity.
inline long naive_ap(const std::array<long, 5>& a, long p) {
  long count = 1;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long lhs = (y * y + a[0] * x * y + a[2] * y) % p;
      long rhs = (((x * x % p) * x) + a[1] * x * x + a[3] * x + a[4]) % p;
      if (((lhs - rhs) % p + p) % p == 0) ++count;
    }
  return p + 1 - count;
}

}  // namespace testfix
