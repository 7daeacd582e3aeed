#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "malleable/edit_metrics.hpp"
#include "malleable/prob_core.hpp"

namespace malleable {

enum class CodeKind { identity, huffman, incremental, ppm, embedding, custom };

std::string code_kind_name(CodeKind kind);
CodeKind parse_code_kind(const std::string& name);

/// Encoder from source blocks W^n to storage strings.
///
/// A conditional code keeps one codeword table per context block (the
/// co-located X block) and is used for the Y side of incremental schemes.
/// Blocks without a codeword map to the fallback word if there is one;
/// decoding the fallback fails, which is how restricted codebooks carry a
/// nonzero error rate.
class PalimpsestCode {
 public:
  PalimpsestCode() = default;
  PalimpsestCode(CodeKind kind, std::size_t block_n, std::size_t source_size, int storage_size,
                 bool conditional = false);

  CodeKind kind() const { return kind_; }
  std::size_t block_n() const { return block_n_; }
  std::size_t block_count() const { return blocks_; }
  std::size_t source_size() const { return source_size_; }
  int storage_alphabet_size() const { return storage_size_; }
  bool conditional() const { return conditional_; }

  void set(std::size_t block, StorageString word, std::size_t context = 0);
  void set_fallback(StorageString word) { fallback_ = std::move(word); }
  const std::optional<StorageString>& fallback() const { return fallback_; }

  /// True when `block` has its own codeword (in `context` if conditional).
  bool covers(std::size_t block, std::size_t context = 0) const;
  const std::optional<StorageString>& entry(std::size_t block, std::size_t context = 0) const;
  /// Throws InputError for an uncovered block when there is no fallback.
  const StorageString& encode(std::size_t block, std::size_t context = 0) const;
  /// Block whose codeword is `word`; nullopt for the fallback or an unknown word.
  std::optional<std::size_t> decode(const StorageString& word) const;

  /// No two distinct blocks share a codeword.
  bool injective() const;
  /// No codeword is a proper prefix of another within one context, and no
  /// two contexts' words collide.
  bool prefix_free() const;
  /// Every codeword (and the fallback) has this length, if uniform.
  std::optional<std::size_t> fixed_length() const;

  /// {"kind", "block_n", "storage_alphabet_size", "codebook", "fallback"?};
  /// the codebook is {block: word}, or {context: {block: word}} when conditional.
  nlohmann::ordered_json to_json(const std::vector<std::string>& alphabet) const;
  static PalimpsestCode from_json(const nlohmann::json& doc, const std::vector<std::string>& alphabet);

 private:
  CodeKind kind_ = CodeKind::custom;
  std::size_t block_n_ = 1;
  std::size_t source_size_ = 0;
  std::size_t blocks_ = 0;
  int storage_size_ = 2;
  bool conditional_ = false;
  std::vector<std::optional<StorageString>> table_;  // context * blocks + block
  std::optional<StorageString> fallback_;
};

}  // namespace malleable
