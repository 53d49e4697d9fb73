#include "ixpsim/prefix_set.hpp"

#include <algorithm>
#include <charconv>

#include "ixpsim/errors.hpp"

namespace ixpsim {

AddrInterval parse_cidr(const std::string& text) {
  const auto bad = [&] { return DataError("malformed CIDR prefix: '" + text + "'"); };

  const auto slash = text.find('/');
  if (slash == std::string::npos) throw bad();
  const std::string quad = text.substr(0, slash);
  const std::string len_str = text.substr(slash + 1);

  std::uint32_t addr = 0;
  std::size_t pos = 0;
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (pos >= quad.size() || quad[pos] != '.') throw bad();
      ++pos;
    }
    unsigned value = 0;
    const char* begin = quad.data() + pos;
    const char* end = quad.data() + quad.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin || value > 255) throw bad();
    pos += static_cast<std::size_t>(ptr - begin);
    addr = (addr << 8) | value;
  }
  if (pos != quad.size()) throw bad();

  unsigned len = 0;
  const auto [ptr, ec] = std::from_chars(len_str.data(), len_str.data() + len_str.size(), len);
  if (ec != std::errc() || ptr != len_str.data() + len_str.size() || len > 32) throw bad();

  const std::uint64_t span = std::uint64_t{1} << (32 - len);
  const std::uint64_t start = (static_cast<std::uint64_t>(addr) / span) * span;
  return AddrInterval{start, start + span};
}

PrefixSet::PrefixSet(std::vector<AddrInterval> intervals) : intervals_(std::move(intervals)) {
  for (const AddrInterval& iv : intervals_)
    if (iv.start >= iv.end || iv.end > (std::uint64_t{1} << 32))
      throw std::invalid_argument("invalid address interval");
  normalize();
}

PrefixSet PrefixSet::from_cidrs(const std::vector<std::string>& cidrs) {
  std::vector<AddrInterval> ivs;
  ivs.reserve(cidrs.size());
  for (const std::string& c : cidrs) ivs.push_back(parse_cidr(c));
  return PrefixSet(std::move(ivs));
}

void PrefixSet::normalize() {
  if (intervals_.empty()) return;
  std::sort(intervals_.begin(), intervals_.end(),
            [](const AddrInterval& x, const AddrInterval& y) {
              return x.start < y.start || (x.start == y.start && x.end < y.end);
            });
  std::vector<AddrInterval> merged;
  merged.push_back(intervals_.front());
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    const AddrInterval& iv = intervals_[i];
    if (iv.start <= merged.back().end) {
      // Overlapping or exactly adjacent: extend.
      merged.back().end = std::max(merged.back().end, iv.end);
    } else {
      merged.push_back(iv);
    }
  }
  intervals_ = std::move(merged);
}

void PrefixSet::add(AddrInterval interval) {
  if (interval.start >= interval.end || interval.end > (std::uint64_t{1} << 32))
    throw std::invalid_argument("invalid address interval");
  intervals_.push_back(interval);
  normalize();
}

void PrefixSet::merge(const PrefixSet& other) {
  if (other.intervals_.empty()) return;
  intervals_.insert(intervals_.end(), other.intervals_.begin(), other.intervals_.end());
  normalize();
}

PrefixSet PrefixSet::set_union(const PrefixSet& a, const PrefixSet& b) {
  PrefixSet out = a;
  out.merge(b);
  return out;
}

std::uint64_t PrefixSet::size() const {
  std::uint64_t total = 0;
  for (const AddrInterval& iv : intervals_) total += iv.end - iv.start;
  return total;
}

}  // namespace ixpsim
