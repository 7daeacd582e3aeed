#include "malleable/edit_metrics.hpp"

#include <algorithm>
#include <numeric>

#include "malleable/errors.hpp"

namespace malleable {

std::size_t hamming_distance(const StorageString& a, const StorageString& b) {
  if (a.size() != b.size())
    throw InputError("hamming distance needs equal lengths (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::size_t extended_hamming_distance(const StorageString& a, const StorageString& b) {
  const std::size_t common = std::min(a.size(), b.size());
  std::size_t d = std::max(a.size(), b.size()) - common;
  for (std::size_t i = 0; i < common; ++i) d += a[i] != b[i];
  return d;
}

std::size_t levenshtein_distance(const StorageString& a, const StorageString& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t distance(const EditMetric& metric, const StorageString& a, const StorageString& b) {
  switch (metric.kind) {
    case MetricKind::hamming:
      return hamming_distance(a, b);
    case MetricKind::extended_hamming:
      return extended_hamming_distance(a, b);
    case MetricKind::levenshtein:
      return levenshtein_distance(a, b);
  }
  return 0;
}

std::string to_string(const StorageString& s) {
  std::string out;
  out.reserve(s.size());
  for (Symbol c : s) out.push_back(c < 10 ? static_cast<char>('0' + c) : static_cast<char>('a' + c - 10));
  return out;
}

StorageString parse_storage_string(std::string_view text, int alphabet_size) {
  StorageString out;
  out.reserve(text.size());
  for (char ch : text) {
    int v = -1;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'z') v = ch - 'a' + 10;
    if (v < 0 || v >= alphabet_size)
      throw InputError("symbol '" + std::string(1, ch) + "' outside storage alphabet of size " +
                       std::to_string(alphabet_size));
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

std::string metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::hamming:
      return "hamming";
    case MetricKind::extended_hamming:
      return "extended_hamming";
    case MetricKind::levenshtein:
      return "levenshtein";
  }
  return "?";
}

MetricKind parse_metric(std::string_view name) {
  if (name == "hamming") return MetricKind::hamming;
  if (name == "extended_hamming" || name == "extended-hamming") return MetricKind::extended_hamming;
  if (name == "levenshtein") return MetricKind::levenshtein;
  throw InputError("unknown metric '" + std::string(name) + "'");
}

}  // namespace malleable
