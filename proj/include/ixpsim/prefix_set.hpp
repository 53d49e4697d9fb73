#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ixpsim {

// Half-open IPv4 address interval [start, end), 0 <= start < end <= 2^32.
struct AddrInterval {
  std::uint64_t start = 0;
  std::uint64_t end = 0;

  bool operator==(const AddrInterval&) const = default;
};

// "a.b.c.d/len" -> interval. Host bits below the mask are ignored (the
// prefix is canonicalized), malformed syntax throws DataError.
AddrInterval parse_cidr(const std::string& text);

// Disjoint, sorted, fully merged (non-adjacent) set of IPv4 intervals.
class PrefixSet {
 public:
  PrefixSet() = default;
  explicit PrefixSet(std::vector<AddrInterval> intervals);  // normalizes

  static PrefixSet from_cidrs(const std::vector<std::string>& cidrs);

  void add(AddrInterval interval);
  void merge(const PrefixSet& other);  // set union

  static PrefixSet set_union(const PrefixSet& a, const PrefixSet& b);

  // Total number of addresses covered. At most 2^32.
  std::uint64_t size() const;

  bool empty() const { return intervals_.empty(); }
  const std::vector<AddrInterval>& intervals() const { return intervals_; }

  bool operator==(const PrefixSet&) const = default;

 private:
  void normalize();

  std::vector<AddrInterval> intervals_;
};

}  // namespace ixpsim
