#include "malleable/code_schemes.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "malleable/blocks.hpp"
#include "malleable/errors.hpp"

namespace malleable {

namespace {

// A code tree: leaves 0..leaves-1 (dummies last), internal nodes after.
struct Tree {
  std::size_t leaves = 0;
  std::size_t real = 0;  // non-dummy leaves
  std::vector<std::vector<std::size_t>> children;  // indexed by node id
};

std::size_t dummy_count(std::size_t symbols, int arity) {
  const std::size_t r = static_cast<std::size_t>(arity);
  std::size_t d = 0;
  while ((symbols + d - 1) % (r - 1) != 0) ++d;
  return d;
}

// Enumerates merge histories. Each step merges `arity` nodes of least
// weight; where the cut falls inside a run of equal weights, every choice
// of tied nodes is a separate history. Stops once visit() returns false.
void enumerate_trees(const std::vector<Scalar>& probs, int arity, bool all_ties,
                     const std::function<bool(const Tree&)>& visit) {
  const std::size_t r = static_cast<std::size_t>(arity);
  Tree base;
  base.real = probs.size();
  base.leaves = probs.size() + dummy_count(probs.size(), arity);
  base.children.assign(base.leaves, {});
  std::vector<std::pair<Scalar, std::size_t>> start;
  for (std::size_t i = 0; i < base.leaves; ++i) start.emplace_back(i < probs.size() ? probs[i] : Scalar(0), i);

  bool stop = false;
  std::function<void(std::vector<std::pair<Scalar, std::size_t>>, Tree&)> rec =
      [&](std::vector<std::pair<Scalar, std::size_t>> pool, Tree& tree) {
        if (stop) return;
        if (pool.size() <= 1) {
          if (!visit(tree)) stop = true;
          return;
        }
        std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
          if (a.first != b.first) return a.first < b.first;
          return a.second < b.second;
        });
        const Scalar& cut = pool[r - 1].first;
        std::vector<std::size_t> forced, tied;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (pool[i].first < cut) forced.push_back(i);
          else if (pool[i].first == cut) tied.push_back(i);
        }
        const std::size_t need = r - forced.size();
        // Combinations of `need` tied positions, lexicographic.
        std::vector<std::size_t> pick(need);
        for (std::size_t i = 0; i < need; ++i) pick[i] = i;
        while (true) {
          std::vector<std::size_t> chosen = forced;
          for (std::size_t i : pick) chosen.push_back(tied[i]);
          std::sort(chosen.begin(), chosen.end());
          std::vector<std::size_t> kids;
          Scalar w(0);
          std::vector<std::pair<Scalar, std::size_t>> next;
          std::size_t c = 0;
          for (std::size_t i = 0; i < pool.size(); ++i) {
            if (c < chosen.size() && chosen[c] == i) {
              kids.push_back(pool[i].second);
              w += pool[i].first;
              ++c;
            } else {
              next.push_back(pool[i]);
            }
          }
          std::sort(kids.begin(), kids.end());
          const std::size_t id = tree.children.size();
          tree.children.push_back(kids);
          next.emplace_back(w, id);
          rec(std::move(next), tree);
          tree.children.pop_back();
          if (stop || !all_ties) return;
          // Advance the combination.
          std::size_t k = need;
          while (k > 0 && pick[k - 1] == tied.size() - need + k - 1) --k;
          if (k == 0) return;
          ++pick[k - 1];
          for (std::size_t j = k; j < need; ++j) pick[j] = pick[j - 1] + 1;
        }
      };
  rec(start, base);
}

// Codewords for one child labeling; perms[i] orders the children of internal node i.
std::vector<StorageString> words_for(const Tree& tree, const std::vector<std::vector<std::size_t>>& order) {
  std::vector<StorageString> words(tree.real);
  std::function<void(std::size_t, StorageString&)> walk = [&](std::size_t node, StorageString& prefix) {
    if (node < tree.leaves) {
      if (node < tree.real) words[node] = prefix;
      return;
    }
    const auto& kids = order[node - tree.leaves];
    for (std::size_t s = 0; s < kids.size(); ++s) {
      prefix.push_back(static_cast<Symbol>(s));
      walk(kids[s], prefix);
      prefix.pop_back();
    }
  };
  StorageString prefix;
  if (tree.children.size() == tree.leaves) {
    // One symbol and no merges: give it a one-symbol word.
    words[0] = StorageString{0};
    return words;
  }
  walk(tree.children.size() - 1, prefix);
  return words;
}

PalimpsestCode make_code(CodeKind kind, const std::vector<StorageString>& words, std::size_t source_size,
                         std::size_t block_n, int arity) {
  PalimpsestCode code(kind, block_n, source_size, arity);
  for (std::size_t b = 0; b < words.size(); ++b) code.set(b, words[b]);
  return code;
}

void check_arity(int arity) {
  if (arity < 2 || arity > 36) throw InputError("huffman: arity must be between 2 and 36");
}

std::size_t alphabet_root(std::size_t blocks, std::size_t block_n) {
  std::size_t q = 1;
  while (true) {
    std::size_t p = 1;
    for (std::size_t i = 0; i < block_n; ++i) p *= q;
    if (p == blocks) return q;
    if (p > blocks) throw InputError("distribution size is not |W|^n");
    ++q;
  }
}

}  // namespace

PalimpsestCode identity_code(const JointSource& src, std::size_t block_n) {
  if (static_cast<int>(src.size()) != src.storage_alphabet_size())
    throw InputError("identity code needs |W| = |V|");
  PalimpsestCode code(CodeKind::identity, block_n, src.size(), src.storage_alphabet_size());
  for (std::size_t b = 0; b < code.block_count(); ++b) {
    StorageString w;
    for (std::size_t letter : block_letters(b, src.size(), block_n)) w.push_back(static_cast<Symbol>(letter));
    code.set(b, std::move(w));
  }
  return code;
}

PalimpsestCode huffman(const Distribution& dist, int arity, std::size_t block_n) {
  check_arity(arity);
  if (dist.size() == 0) throw InputError("huffman: empty distribution");
  const std::size_t q = alphabet_root(dist.size(), block_n);
  std::optional<PalimpsestCode> out;
  enumerate_trees(dist.probs(), arity, false, [&](const Tree& tree) {
    std::vector<std::vector<std::size_t>> order(tree.children.begin() + static_cast<std::ptrdiff_t>(tree.leaves),
                                                tree.children.end());
    out = make_code(CodeKind::huffman, words_for(tree, order), q, block_n, arity);
    return false;
  });
  return *out;
}

HuffmanFamily huffman_family(const Distribution& dist, int arity, std::size_t cap, std::size_t block_n) {
  check_arity(arity);
  if (cap == 0) throw InputError("huffman family: cap must be at least 1");
  if (dist.size() == 0) throw InputError("huffman: empty distribution");
  const std::size_t q = alphabet_root(dist.size(), block_n);
  HuffmanFamily fam{dist, {}, false};
  std::set<std::vector<StorageString>> seen;
  enumerate_trees(dist.probs(), arity, true, [&](const Tree& tree) {
    std::vector<std::vector<std::size_t>> order(tree.children.begin() + static_cast<std::ptrdiff_t>(tree.leaves),
                                                tree.children.end());
    // Mixed-radix walk over the child permutations of every internal node.
    while (true) {
      auto words = words_for(tree, order);
      if (seen.insert(words).second) {
        if (fam.codes.size() == cap) {
          fam.truncated = true;
          return false;
        }
        fam.codes.push_back(make_code(CodeKind::huffman, words, q, block_n, arity));
      }
      std::size_t i = 0;
      for (; i < order.size(); ++i)
        if (std::next_permutation(order[i].begin(), order[i].end())) break;
      if (i == order.size()) return true;
    }
  });
  return fam;
}

Distribution design_distribution(const JointSource& src) {
  auto [px, py] = marginals(src);
  if (px == py) return px;
  std::vector<Scalar> mix;
  for (std::size_t i = 0; i < px.size(); ++i) mix.push_back((px[i] + py[i]) * Scalar(1, 2));
  return Distribution(std::move(mix));
}

CodePair incremental_code(const JointSource& src, std::size_t block_n) {
  const int arity = src.storage_alphabet_size();
  auto [px, py] = marginals(src);
  const Distribution pxn = block_distribution(px, block_n);
  PalimpsestCode cx = huffman(pxn, arity, block_n);
  PalimpsestCode cx_out(CodeKind::incremental, block_n, src.size(), arity);
  PalimpsestCode cy(CodeKind::incremental, block_n, src.size(), arity, true);
  const std::size_t blocks = cx.block_count();
  for (std::size_t x = 0; x < blocks; ++x) {
    cx_out.set(x, cx.encode(x));
    if (!pxn[x].is_positive()) continue;
    std::vector<std::size_t> succ;
    std::vector<Scalar> cond;
    for (std::size_t y = 0; y < blocks; ++y) {
      Scalar p = block_joint(src, x, y, block_n);
      if (!p.is_positive()) continue;
      succ.push_back(y);
      cond.push_back(p / pxn[x]);
    }
    const StorageString& head = cx.encode(x);
    if (succ.size() == 1) {
      StorageString w = head;
      if (succ[0] != x) w.push_back(0);
      cy.set(succ[0], std::move(w), x);
      continue;
    }
    // Conditional Huffman over the successors of x (not a block alphabet).
    Scalar total(0);
    for (const auto& c : cond) total += c;
    for (auto& c : cond) c /= total;
    std::vector<StorageString> inc;
    enumerate_trees(cond, arity, false, [&](const Tree& tree) {
      std::vector<std::vector<std::size_t>> order(tree.children.begin() + static_cast<std::ptrdiff_t>(tree.leaves),
                                                  tree.children.end());
      inc = words_for(tree, order);
      return false;
    });
    for (std::size_t i = 0; i < succ.size(); ++i) {
      StorageString w = head;
      w.insert(w.end(), inc[i].begin(), inc[i].end());
      cy.set(succ[i], std::move(w), x);
    }
  }
  return {std::move(cx_out), std::move(cy)};
}

PalimpsestCode ppm_code_on(const JointSource& src, std::size_t block_n, const std::vector<std::size_t>& blocks) {
  PalimpsestCode code(CodeKind::ppm, block_n, src.size(), src.storage_alphabet_size());
  const std::size_t len = blocks.size();
  for (std::size_t i = 0; i < len; ++i) {
    StorageString w(len, 0);
    w[i] = 1;
    code.set(blocks[i], std::move(w));
  }
  if (len < code.block_count()) code.set_fallback(StorageString(len, 0));
  return code;
}

PalimpsestCode ppm_code(const JointSource& src, std::size_t block_n, bool typical_only, const TypicalityConfig& cfg) {
  if (!typical_only) {
    const std::size_t total = block_count(src.size(), block_n, std::size_t{1} << 16);
    std::vector<std::size_t> all(total);
    for (std::size_t b = 0; b < total; ++b) all[b] = b;
    return ppm_code_on(src, block_n, all);
  }
  TypicalityConfig c = cfg;
  c.block_n = block_n;
  return ppm_code_on(src, block_n, typicality_graph(src, c).blocks);
}

std::vector<StorageString> gray_code(unsigned m) {
  if (m == 0 || m > kHypercubeCap) throw InputError("gray code: length must be between 1 and 24");
  std::vector<StorageString> out;
  const std::size_t count = std::size_t{1} << m;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t g = i ^ (i >> 1);
    StorageString w(m);
    for (unsigned b = 0; b < m; ++b) w[b] = static_cast<Symbol>((g >> (m - 1 - b)) & 1u);
    out.push_back(std::move(w));
  }
  return out;
}

PalimpsestCode code_from_map(const JointSource& src, std::size_t block_n, const LabeledGraph& host,
                             const std::vector<Vertex>& map) {
  PalimpsestCode code(CodeKind::embedding, block_n, src.size(), src.storage_alphabet_size());
  if (map.size() != code.block_count()) throw InputError("code_from_map: map does not cover every block");
  for (std::size_t b = 0; b < map.size(); ++b) {
    const auto& label = host.label(map[b]);
    if (!label) throw InputError("code_from_map: host vertex has no label");
    code.set(b, *label);
  }
  return code;
}

EmbeddingCode embedding_code(const JointSource& src, std::size_t block_n, const LabeledGraph& host, LabelMode mode,
                             const SearchOptions& options) {
  LabeledGraph guest = adjacency_graph(src, block_n);
  const PairMass mass = PairMass::from_source(src, block_n);

  if (mode == LabelMode::fixed) {
    auto r = tolerant_embed(guest, host, mass, false, options);
    if (!r) throw InfeasibleError("adjacency graph does not fit the host");
    EmbeddingCode out{code_from_map(src, block_n, host, r->vertex_map), std::move(*r)};
    return out;
  }

  const HuffmanFamily fam =
      huffman_family(block_distribution(design_distribution(src), block_n), src.storage_alphabet_size(),
                     kHuffmanFamilyCap, block_n);
  std::optional<EmbeddingCode> best;
  for (std::size_t i = 0; i < fam.codes.size(); ++i) {
    const PalimpsestCode& member = fam.codes[i];
    bool placeable = true;
    for (Vertex v = 0; v < guest.vertex_count(); ++v) {
      guest.set_label(v, member.encode(v));
      placeable = placeable && host.find_label(member.encode(v)).has_value();
    }
    if (!placeable) continue;
    auto r = tolerant_embed(guest, host, mass, true, options);
    if (!r) continue;
    if (!best || r->cost < best->embedding.cost) {
      best = EmbeddingCode{member, std::move(*r), i, fam.codes.size(), fam.truncated};
      best->code = member;
    }
  }
  if (!best) throw InfeasibleError("no Huffman family member fits the host");
  best->family_size = fam.codes.size();
  best->family_truncated = fam.truncated;
  return *best;
}

}  // namespace malleable
