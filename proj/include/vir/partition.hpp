#pragma once

#include <map>
#include <string>
#include <vector>

#include "vir/scalar.hpp"

namespace vir {

struct Partition {
  std::vector<int> parts;  // non-increasing, positive

  int weight() const;
  int length() const { return static_cast<int>(parts.size()); }
  int multiplicity(int j) const;
  bool valid() const;
  std::string to_string() const;

  Partition with_part(int k) const;     // λ ∪ {k}
  Partition without_part(int k) const;  // λ \ {k}; k must occur

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }
  friend bool operator<(const Partition& a, const Partition& b) { return a.parts < b.parts; }
};

// Partitions of k, reverse-lexicographic: (4), (3,1), (2,2), (2,1,1), (1,1,1,1).
std::vector<Partition> enumerate_partitions(int k);

// ∏_j j^{m_j} m_j!
Rational basis_norm_sq(const Partition& lambda);

// All partitions of weight <= cutoff, ordered by level then reverse-lex.
class PartitionTable {
 public:
  explicit PartitionTable(int cutoff);

  int cutoff() const { return cutoff_; }
  int size() const { return static_cast<int>(all_.size()); }
  const Partition& at(int i) const { return all_[i]; }
  int level_begin(int k) const { return offsets_[k]; }
  int level_end(int k) const { return offsets_[k + 1]; }
  int level_dim(int k) const { return offsets_[k + 1] - offsets_[k]; }
  int level_of(int i) const { return levels_[i]; }
  const std::vector<int>& offsets() const { return offsets_; }
  // -1 if absent or above the cutoff.
  int index_of(const Partition& p) const;

 private:
  int cutoff_;
  std::vector<Partition> all_;
  std::vector<int> offsets_, levels_;
  std::map<std::vector<int>, int> index_;
};

}  // namespace vir
