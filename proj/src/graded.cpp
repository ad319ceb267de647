#include "vir/graded.hpp"

namespace vir {

GradedSpace::GradedSpace(int cutoff_, std::vector<int> offsets_, std::vector<Rational> norm_sq_)
    : cutoff(cutoff_), offsets(std::move(offsets_)), norm_sq(std::move(norm_sq_)) {
  if (static_cast<int>(offsets.size()) != cutoff + 2 || static_cast<int>(norm_sq.size()) != offsets.back())
    throw std::invalid_argument("GradedSpace: inconsistent layout");
  norm_sq_d.reserve(norm_sq.size());
  for (const auto& q : norm_sq) {
    if (sgn(q) <= 0) throw std::invalid_argument("GradedSpace: non-positive norm");
    norm_sq_d.push_back(q.get_d());
  }
  level.resize(norm_sq.size());
  for (int k = 0; k <= cutoff; ++k)
    for (int i = offsets[k]; i < offsets[k + 1]; ++i) level[i] = k;
}

int GradedSpace::dim_through(int k) const {
  if (k < 0) return 0;
  if (k > cutoff) k = cutoff;
  return offsets[k + 1];
}

}  // namespace vir
