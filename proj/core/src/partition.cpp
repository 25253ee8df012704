#include "itca/partition.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "itca/errors.hpp"

namespace itca {

Partition Partition::canonicalize(std::span<const int> raw_assignment) {
  if (raw_assignment.empty()) throw EmptyAssignment();
  std::vector<int> relabel;  // relabel[i] = new label of old group i, lazily grown
  std::vector<int> assignment(raw_assignment.size());
  int next = 0;
  for (std::size_t i = 0; i < raw_assignment.size(); ++i) {
    const int old_label = raw_assignment[i];
    // Old labels may be arbitrary integers; map them by first occurrence.
    std::size_t slot = 0;
    for (; slot < relabel.size(); ++slot) {
      if (relabel[slot] == old_label) break;
    }
    if (slot == relabel.size()) {
      relabel.push_back(old_label);
      ++next;
    }
    assignment[i] = static_cast<int>(slot) + 1;
  }
  return Partition(std::move(assignment), next);
}

Partition Partition::identity(int k0) {
  std::vector<int> a(static_cast<std::size_t>(k0));
  std::iota(a.begin(), a.end(), 1);
  return Partition(std::move(a), k0);
}

Partition Partition::all_combined(int k0) {
  return Partition(std::vector<int>(static_cast<std::size_t>(k0), 1), 1);
}

int Partition::apply(int label) const {
  if (label < 1 || label > k0()) throw LabelOutOfRange(label, k0());
  return assignment_[static_cast<std::size_t>(label - 1)];
}

std::vector<std::vector<int>> Partition::groups() const {
  std::vector<std::vector<int>> g(static_cast<std::size_t>(k_));
  for (int i = 0; i < k0(); ++i) {
    g[static_cast<std::size_t>(assignment_[static_cast<std::size_t>(i)] - 1)].push_back(i + 1);
  }
  return g;
}

bool Partition::is_ordinal() const {
  // In canonical form, contiguous blocks are exactly the nondecreasing
  // assignments (a revisit of an earlier label would break monotonicity).
  for (std::size_t i = 1; i < assignment_.size(); ++i) {
    if (assignment_[i] < assignment_[i - 1]) return false;
  }
  return true;
}

std::string Partition::text() const {
  std::string out = "{";
  const auto gs = groups();
  for (std::size_t g = 0; g < gs.size(); ++g) {
    if (g > 0) out += ',';
    if (gs[g].size() == 1) {
      out += std::to_string(gs[g][0]);
    } else {
      out += '(';
      for (std::size_t j = 0; j < gs[g].size(); ++j) {
        if (j > 0) out += ',';
        out += std::to_string(gs[g][j]);
      }
      out += ')';
    }
  }
  out += '}';
  return out;
}

Partition Partition::parse(std::string_view text) {
  // Grammar: '{' group (',' group)* '}', group := label | '(' label (',' label)+ ')'
  std::size_t pos = 0;
  const auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  const auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) {
      throw ParseFailure("partition text: expected '" + std::string(1, c) + "' at offset " +
                         std::to_string(pos) + " in \"" + std::string(text) + "\"");
    }
    ++pos;
  };
  const auto parse_label = [&]() -> int {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) {
      throw ParseFailure("partition text: expected label at offset " + std::to_string(pos) +
                         " in \"" + std::string(text) + "\"");
    }
    try {
      return std::stoi(std::string(text.substr(start, pos - start)));
    } catch (const std::out_of_range&) {
      throw ParseFailure("partition text: label out of range in \"" + std::string(text) + "\"");
    }
  };

  expect('{');
  std::vector<std::vector<int>> groups;
  for (;;) {
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      std::vector<int> group;
      group.push_back(parse_label());
      skip_ws();
      while (pos < text.size() && text[pos] == ',') {
        ++pos;
        group.push_back(parse_label());
        skip_ws();
      }
      expect(')');
      groups.push_back(std::move(group));
    } else {
      groups.push_back({parse_label()});
    }
    skip_ws();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    break;
  }
  expect('}');
  skip_ws();
  if (pos != text.size()) {
    throw ParseFailure("partition text: trailing characters in \"" + std::string(text) + "\"");
  }

  int max_label = 0;
  for (const auto& g : groups) {
    for (int l : g) max_label = std::max(max_label, l);
  }
  if (max_label == 0) throw ParseFailure("partition text: no labels");
  std::vector<int> assignment(static_cast<std::size_t>(max_label), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int l : groups[g]) {
      if (l < 1) throw ParseFailure("partition text: labels are 1-based");
      auto& slot = assignment[static_cast<std::size_t>(l - 1)];
      if (slot != 0) {
        throw ParseFailure("partition text: label " + std::to_string(l) + " appears twice");
      }
      slot = static_cast<int>(g) + 1;
    }
  }
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == 0) {
      throw ParseFailure("partition text: label " + std::to_string(i + 1) + " missing");
    }
  }
  return canonicalize(assignment);
}

std::size_t PartitionHash::operator()(const Partition& p) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int v : p.assignment()) {
    h ^= static_cast<std::size_t>(v);
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool refines(const Partition& finer, const Partition& coarser) {
  if (finer.k0() != coarser.k0()) return false;
  // finer refines coarser iff equal finer-labels imply equal coarser-labels
  // never splits: i.e. each finer class sits inside one coarser class.
  std::vector<int> target(static_cast<std::size_t>(finer.k()), 0);
  for (int i = 1; i <= finer.k0(); ++i) {
    const int f = finer.apply(i);
    const int c = coarser.apply(i);
    auto& t = target[static_cast<std::size_t>(f - 1)];
    if (t == 0) {
      t = c;
    } else if (t != c) {
      return false;
    }
  }
  return true;
}

OrdinalEncoding encode_ordinal(const Partition& p) {
  if (!p.is_ordinal()) throw NotOrdinal(p.text());
  OrdinalEncoding e;
  e.bits.resize(static_cast<std::size_t>(p.k0() - 1));
  for (int i = 1; i < p.k0(); ++i) {
    e.bits[static_cast<std::size_t>(i - 1)] =
        static_cast<std::uint8_t>(p.apply(i) != p.apply(i + 1) ? 1 : 0);
  }
  return e;
}

Partition decode_ordinal(const OrdinalEncoding& e) {
  std::vector<int> assignment;
  assignment.reserve(e.bits.size() + 1);
  int label = 1;
  assignment.push_back(label);
  for (std::uint8_t b : e.bits) {
    if (b) ++label;
    assignment.push_back(label);
  }
  return Partition::canonicalize(assignment);
}

int hamming(const OrdinalEncoding& a, const OrdinalEncoding& b) {
  if (a.bits.size() != b.bits.size()) throw LengthMismatch(a.bits.size(), b.bits.size());
  int d = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    d += (a.bits[i] != b.bits[i]) ? 1 : 0;
  }
  return d;
}

void for_each_ordinal(int k0, bool include_identity,
                      const std::function<void(const Partition&)>& visit) {
  if (k0 < 1) return;
  if (k0 == 1) {
    if (include_identity) visit(Partition::identity(1));
    return;
  }
  const std::uint64_t total = std::uint64_t{1} << (k0 - 1);
  OrdinalEncoding e;
  e.bits.resize(static_cast<std::size_t>(k0 - 1));
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (!include_identity && mask + 1 == total) continue;  // all-ones mask = identity
    for (int i = 0; i < k0 - 1; ++i) {
      e.bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((mask >> i) & 1u);
    }
    visit(decode_ordinal(e));
  }
}

void for_each_nominal(int k0, bool include_identity,
                      const std::function<void(const Partition&)>& visit) {
  if (k0 < 1) return;
  if (k0 > kNominalEnumerationCap) throw TooManyClasses(k0, kNominalEnumerationCap);

  // Iterate restricted-growth strings a[0..k0-1]: a[0] = 1 and
  // a[i] <= 1 + max(a[0..i-1]). Successor: increment the rightmost
  // position that can grow, reset the tail to 1.
  std::vector<int> a(static_cast<std::size_t>(k0), 1);
  std::vector<int> prefix_max(static_cast<std::size_t>(k0), 1);  // max of a[0..i]
  const auto emit = [&] {
    Partition p = Partition::canonicalize(a);
    if (include_identity || p.k() != k0) visit(p);
  };
  for (;;) {
    emit();
    // a[i] can grow only while it is <= prefix max of the strict prefix.
    int i = k0 - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] ==
                        prefix_max[static_cast<std::size_t>(i - 1)] + 1) {
      --i;
    }
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < k0; ++j) {
      a[static_cast<std::size_t>(j)] = 1;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(j - 1)];
    }
  }
}

std::vector<Partition> enumerate_ordinal(int k0, bool include_identity) {
  std::vector<Partition> out;
  for_each_ordinal(k0, include_identity, [&](const Partition& p) { out.push_back(p); });
  return out;
}

std::vector<Partition> enumerate_nominal(int k0, bool include_identity) {
  std::vector<Partition> out;
  for_each_nominal(k0, include_identity, [&](const Partition& p) { out.push_back(p); });
  return out;
}

std::uint64_t count_ordinal(int k0, bool include_identity) {
  if (k0 < 1) return 0;
  const std::uint64_t total = std::uint64_t{1} << (k0 - 1);
  return include_identity ? total : total - 1;
}

std::uint64_t count_nominal(int k0, bool include_identity) {
  if (k0 < 1) return 0;
  if (k0 > kNominalEnumerationCap) throw TooManyClasses(k0, kNominalEnumerationCap);
  // Same restricted-growth successor walk as for_each_nominal, counting
  // without materializing partitions. The identity is the one string with
  // k0 distinct values.
  std::vector<int> a(static_cast<std::size_t>(k0), 1);
  std::vector<int> prefix_max(static_cast<std::size_t>(k0), 1);
  std::uint64_t n = 0;
  for (;;) {
    if (include_identity || prefix_max[static_cast<std::size_t>(k0 - 1)] != k0) ++n;
    int i = k0 - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] ==
                        prefix_max[static_cast<std::size_t>(i - 1)] + 1) {
      --i;
    }
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < k0; ++j) {
      a[static_cast<std::size_t>(j)] = 1;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(j - 1)];
    }
  }
  return n;
}

Partition merge_classes(const Partition& p, int i, int j) {
  std::vector<int> a = p.assignment();
  for (auto& v : a) {
    if (v == j) v = i;
  }
  return Partition::canonicalize(a);
}

std::vector<Partition> neighbors(const Partition& p, bool ordinal,
                                 std::span<const std::pair<int, int>> forbidden_merges) {
  std::vector<Partition> out;
  if (p.k() < 2) return out;

  const auto gs = p.groups();
  const auto forbidden = [&](int gi, int gj) {
    for (const auto& [a, b] : forbidden_merges) {
      const bool hit_ij =
          std::binary_search(gs[static_cast<std::size_t>(gi - 1)].begin(),
                             gs[static_cast<std::size_t>(gi - 1)].end(), a) &&
          std::binary_search(gs[static_cast<std::size_t>(gj - 1)].begin(),
                             gs[static_cast<std::size_t>(gj - 1)].end(), b);
      const bool hit_ji =
          std::binary_search(gs[static_cast<std::size_t>(gi - 1)].begin(),
                             gs[static_cast<std::size_t>(gi - 1)].end(), b) &&
          std::binary_search(gs[static_cast<std::size_t>(gj - 1)].begin(),
                             gs[static_cast<std::size_t>(gj - 1)].end(), a);
      if (hit_ij || hit_ji) return true;
    }
    return false;
  };

  if (ordinal) {
    for (int g = 1; g < p.k(); ++g) {
      if (forbidden(g, g + 1)) continue;
      out.push_back(merge_classes(p, g, g + 1));
    }
  } else {
    for (int gi = 1; gi <= p.k(); ++gi) {
      for (int gj = gi + 1; gj <= p.k(); ++gj) {
        if (forbidden(gi, gj)) continue;
        out.push_back(merge_classes(p, gi, gj));
      }
    }
  }
  return out;
}

bool prefer_partition(const Partition& a, const Partition& b) {
  if (a.k() != b.k()) return a.k() > b.k();
  return a.assignment() < b.assignment();
}

}  // namespace itca
