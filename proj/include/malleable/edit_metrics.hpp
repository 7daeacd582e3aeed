#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace malleable {

using Symbol = std::uint8_t;

/// A finite string over the storage alphabet V = {0, ..., |V|-1}.
using StorageString = std::vector<Symbol>;

enum class MetricKind { hamming, extended_hamming, levenshtein };

struct EditMetric {
  MetricKind kind = MetricKind::hamming;
  int alphabet_size = 2;
};

/// Edit distance between two storage strings.
///
/// hamming: substitutions only, equal lengths required (InputError otherwise).
/// extended_hamming: substitutions on the common prefix plus |len(a) - len(b)|.
/// levenshtein: unit-cost insertion, deletion and substitution.
std::size_t distance(const EditMetric& metric, const StorageString& a, const StorageString& b);

std::size_t hamming_distance(const StorageString& a, const StorageString& b);
std::size_t extended_hamming_distance(const StorageString& a, const StorageString& b);
std::size_t levenshtein_distance(const StorageString& a, const StorageString& b);

inline std::size_t length(const StorageString& a) { return a.size(); }

/// Digits 0-9 then letters a-z; alphabets up to 36 symbols.
std::string to_string(const StorageString& s);
StorageString parse_storage_string(std::string_view text, int alphabet_size);

std::string metric_name(MetricKind kind);
MetricKind parse_metric(std::string_view name);

}  // namespace malleable
