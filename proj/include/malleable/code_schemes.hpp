#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "malleable/block_typicality.hpp"
#include "malleable/code.hpp"
#include "malleable/embedding.hpp"
#include "malleable/graph_core.hpp"
#include "malleable/prob_core.hpp"

namespace malleable {

/// Codeword i is the block itself written over V; needs |W| = |V|.
PalimpsestCode identity_code(const JointSource& src, std::size_t block_n = 1);

/// r-ary Huffman code. Ties merge the lowest-index nodes first and children
/// are labeled in creation order, so the result is the first family member.
PalimpsestCode huffman(const Distribution& dist, int arity, std::size_t block_n = 1);

struct HuffmanFamily {
  Distribution base;
  std::vector<PalimpsestCode> codes;  // distinct, in enumeration order
  bool truncated = false;
};

inline constexpr std::size_t kHuffmanFamilyCap = 4096;

/// Every optimal code reachable by resolving merge ties differently and by
/// permuting the children of each internal node.
HuffmanFamily huffman_family(const Distribution& dist, int arity, std::size_t cap = kHuffmanFamilyCap,
                             std::size_t block_n = 1);

/// Distribution used by the single-code schemes: the X/Y average, which
/// is p_X itself for a stationary source.
Distribution design_distribution(const JointSource& src);

struct CodePair {
  PalimpsestCode x;
  PalimpsestCode y;
};

/// X: Huffman over p_X^n. Y: the X codeword of the co-located block followed
/// by a Huffman codeword for p(y | x). A context whose only successor is x
/// itself gets an empty increment; a lone successor y != x gets one symbol
/// so that an edited block never shares the stored word.
CodePair incremental_code(const JointSource& src, std::size_t block_n);

/// Pulse-position code: block b becomes the weight-one word of length |W|^n
/// with its 1 at position b. With `typical_only` the codebook covers the
/// vertices of the joint typicality graph (length |S|) and every other
/// block is sent to the all-zero word.
PalimpsestCode ppm_code(const JointSource& src, std::size_t block_n, bool typical_only = false,
                        const TypicalityConfig& cfg = {});

/// Same as the restricted ppm_code, on an explicit sorted block list.
PalimpsestCode ppm_code_on(const JointSource& src, std::size_t block_n, const std::vector<std::size_t>& blocks);

/// Binary reflected Gray code of length m, as 2^m words.
std::vector<StorageString> gray_code(unsigned m);

/// Code that writes block b as the host label of map[b].
PalimpsestCode code_from_map(const JointSource& src, std::size_t block_n, const LabeledGraph& host,
                             const std::vector<Vertex>& map);

enum class LabelMode { fixed, huffman_family };

struct EmbeddingCode {
  PalimpsestCode code;
  EmbeddingResult embedding;
  std::size_t family_index = 0;  // member chosen from the family (0 for fixed labels)
  std::size_t family_size = 1;
  bool family_truncated = false;
};

/// Adjacency graph of the n-block source embedded into `host`.
///
/// fixed: the tolerant search chooses host vertices freely and each block
/// takes its vertex's label. huffman_family: every Huffman code of the
/// design distribution is tried as a vertex attribute assignment and the
/// cheapest feasible member wins (first in family order on ties).
/// Throws InfeasibleError when nothing fits.
EmbeddingCode embedding_code(const JointSource& src, std::size_t block_n, const LabeledGraph& host,
                             LabelMode mode, const SearchOptions& options = {});

}  // namespace malleable
