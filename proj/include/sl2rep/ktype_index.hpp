// Index of a K-type basis function: character class q, radial degree l,
// angular weight m.  Admissible indices satisfy m = 2l + q (mod 4).
#pragma once

namespace sl2rep {

struct KTypeIndex {
  int q = 0;  // in {0,1,2,3}
  int l = 0;  // >= 0
  int m = 0;

  friend bool operator==(const KTypeIndex&, const KTypeIndex&) = default;
};

inline bool admissible(const KTypeIndex& idx) {
  if (idx.q < 0 || idx.q > 3 || idx.l < 0) return false;
  int d = idx.m - 2 * idx.l - idx.q;
  return d % 4 == 0;
}

}  // namespace sl2rep
