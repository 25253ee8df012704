#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itca {

// A class combination: a surjective map from the K0 original class labels
// onto K <= K0 combined labels, stored in canonical (restricted-growth)
// form so that equal groupings compare equal element-wise. Labels are
// 1-based on both sides, matching the text form "{(1,2),3,(4,5)}".
class Partition {
 public:
  // Relabels an arbitrary grouping by first occurrence. Throws EmptyAssignment.
  static Partition canonicalize(std::span<const int> raw_assignment);
  static Partition identity(int k0);
  static Partition all_combined(int k0);
  // Parses the text form, e.g. "{(1,2),3}". Throws ParseFailure.
  static Partition parse(std::string_view text);

  int k0() const { return static_cast<int>(assignment_.size()); }
  int k() const { return k_; }
  const std::vector<int>& assignment() const { return assignment_; }

  // pi_K(label). Throws LabelOutOfRange.
  int apply(int label) const;

  // pi_K^{-1}: original labels per combined class, ascending within a group.
  std::vector<std::vector<int>> groups() const;

  // True when every combined class is a contiguous block of original labels.
  bool is_ordinal() const;

  // Text form with 1-based labels, emitted bit-exactly: "{(1,2),3,(4,5)}".
  std::string text() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  Partition(std::vector<int> assignment, int k)
      : assignment_(std::move(assignment)), k_(k) {}

  std::vector<int> assignment_;
  int k_ = 0;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const;
};

// True when every combined class of `coarser` is a union of `finer`'s classes.
bool refines(const Partition& finer, const Partition& coarser);

// Stars-and-bars form of an ordinal combination: bit i is 0 iff original
// classes i+1 and i+2 share a combined class.
struct OrdinalEncoding {
  std::vector<std::uint8_t> bits;

  friend bool operator==(const OrdinalEncoding&, const OrdinalEncoding&) = default;
};

OrdinalEncoding encode_ordinal(const Partition& p);  // throws NotOrdinal
Partition decode_ordinal(const OrdinalEncoding& e);
int hamming(const OrdinalEncoding& a, const OrdinalEncoding& b);  // throws LengthMismatch

// Nominal enumeration refuses k0 beyond this (Bell growth).
inline constexpr int kNominalEnumerationCap = 14;

// Visits each contiguous-block partition of [k0] once; deterministic order.
void for_each_ordinal(int k0, bool include_identity,
                      const std::function<void(const Partition&)>& visit);
// Visits each set partition of [k0] once via restricted-growth strings.
// Throws TooManyClasses when k0 > kNominalEnumerationCap.
void for_each_nominal(int k0, bool include_identity,
                      const std::function<void(const Partition&)>& visit);

std::vector<Partition> enumerate_ordinal(int k0, bool include_identity);
std::vector<Partition> enumerate_nominal(int k0, bool include_identity);

// Streaming counts (no materialization).
std::uint64_t count_ordinal(int k0, bool include_identity);
std::uint64_t count_nominal(int k0, bool include_identity);

// Every partition reachable from p by merging exactly two of its combined
// classes: all C(K,2) pairs in nominal mode, the K-1 adjacent pairs in
// ordinal mode. Merges that would place a forbidden pair of original
// classes into one combined class are skipped. Empty for K = 1.
std::vector<Partition> neighbors(const Partition& p, bool ordinal,
                                 std::span<const std::pair<int, int>> forbidden_merges = {});

// Merges combined classes i and j (1-based) of p; canonical result.
Partition merge_classes(const Partition& p, int i, int j);

// Argmax tie order: larger K first, then lexicographically smaller
// assignment. Returns true when `a` is preferred over `b`.
bool prefer_partition(const Partition& a, const Partition& b);

}  // namespace itca
