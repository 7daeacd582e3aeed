#include "malleable/code.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "malleable/blocks.hpp"
#include "malleable/errors.hpp"

namespace malleable {

namespace {
constexpr std::size_t kCodeBlockCap = std::size_t{1} << 22;
}

std::string code_kind_name(CodeKind kind) {
  switch (kind) {
    case CodeKind::identity: return "identity";
    case CodeKind::huffman: return "huffman";
    case CodeKind::incremental: return "incremental";
    case CodeKind::ppm: return "ppm";
    case CodeKind::embedding: return "embedding";
    case CodeKind::custom: return "custom";
  }
  return "custom";
}

CodeKind parse_code_kind(const std::string& name) {
  for (CodeKind k : {CodeKind::identity, CodeKind::huffman, CodeKind::incremental, CodeKind::ppm,
                     CodeKind::embedding, CodeKind::custom})
    if (code_kind_name(k) == name) return k;
  throw InputError("unknown code kind '" + name + "'");
}

PalimpsestCode::PalimpsestCode(CodeKind kind, std::size_t block_n, std::size_t source_size, int storage_size,
                               bool conditional)
    : kind_(kind),
      block_n_(block_n),
      source_size_(source_size),
      blocks_(malleable::block_count(source_size, block_n, kCodeBlockCap)),
      storage_size_(storage_size),
      conditional_(conditional) {
  if (block_n == 0) throw InputError("code block length must be at least 1");
  if (storage_size < 2) throw InputError("storage alphabet must have at least 2 symbols");
  const std::size_t contexts = conditional ? blocks_ : 1;
  if (contexts > kCodeBlockCap / blocks_) throw ResourceError("conditional code table too large");
  table_.assign(contexts * blocks_, std::nullopt);
}

void PalimpsestCode::set(std::size_t block, StorageString word, std::size_t context) {
  if (block >= blocks_ || (conditional_ ? context >= blocks_ : context != 0))
    throw InputError("code: block or context out of range");
  for (Symbol s : word)
    if (s >= storage_size_) throw InputError("code: symbol outside the storage alphabet");
  table_[context * blocks_ + block] = std::move(word);
}

bool PalimpsestCode::covers(std::size_t block, std::size_t context) const {
  return entry(block, context).has_value();
}

const std::optional<StorageString>& PalimpsestCode::entry(std::size_t block, std::size_t context) const {
  if (!conditional_) context = 0;
  return table_.at(context * blocks_ + block);
}

const StorageString& PalimpsestCode::encode(std::size_t block, std::size_t context) const {
  const auto& e = entry(block, context);
  if (e) return *e;
  if (fallback_) return *fallback_;
  throw InputError("code: block has no codeword and there is no fallback");
}

std::optional<std::size_t> PalimpsestCode::decode(const StorageString& word) const {
  if (fallback_ && word == *fallback_) return std::nullopt;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] && *table_[i] == word) return i % blocks_;
  return std::nullopt;
}

bool PalimpsestCode::injective() const {
  std::map<StorageString, std::size_t> owner;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (!table_[i]) continue;
    auto [it, fresh] = owner.emplace(*table_[i], i % blocks_);
    if (!fresh && it->second != i % blocks_) return false;
    if (fallback_ && *table_[i] == *fallback_) return false;
  }
  return true;
}

bool PalimpsestCode::prefix_free() const {
  std::set<StorageString> words;
  for (const auto& e : table_)
    if (e && !words.insert(*e).second) return false;
  // In sorted order a word that prefixes others is immediately followed by one of them.
  for (auto it = words.begin(); it != words.end(); ++it) {
    auto next = std::next(it);
    if (next != words.end() && next->size() > it->size() &&
        std::equal(it->begin(), it->end(), next->begin()))
      return false;
  }
  return true;
}

std::optional<std::size_t> PalimpsestCode::fixed_length() const {
  std::optional<std::size_t> len;
  auto check = [&](const StorageString& w) {
    if (!len) len = w.size();
    return *len == w.size();
  };
  for (const auto& e : table_)
    if (e && !check(*e)) return std::nullopt;
  if (fallback_ && !check(*fallback_)) return std::nullopt;
  return len;
}

nlohmann::ordered_json PalimpsestCode::to_json(const std::vector<std::string>& alphabet) const {
  if (alphabet.size() != source_size_) throw InputError("code: alphabet size mismatch");
  nlohmann::ordered_json doc;
  doc["kind"] = code_kind_name(kind_);
  doc["block_n"] = block_n_;
  doc["storage_alphabet_size"] = storage_size_;
  doc["conditional"] = conditional_;
  nlohmann::ordered_json book = nlohmann::ordered_json::object();
  const std::size_t contexts = conditional_ ? blocks_ : 1;
  for (std::size_t c = 0; c < contexts; ++c) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t b = 0; b < blocks_; ++b)
      if (const auto& e = table_[c * blocks_ + b]) row[block_name(alphabet, b, block_n_)] = malleable::to_string(*e);
    if (!conditional_) {
      book = std::move(row);
    } else if (!row.empty()) {
      book[block_name(alphabet, c, block_n_)] = std::move(row);
    }
  }
  doc["codebook"] = std::move(book);
  if (fallback_) doc["fallback"] = malleable::to_string(*fallback_);
  return doc;
}

PalimpsestCode PalimpsestCode::from_json(const nlohmann::json& doc, const std::vector<std::string>& alphabet) {
  try {
    const std::size_t n = doc.at("block_n").get<std::size_t>();
    const int storage = doc.at("storage_alphabet_size").get<int>();
    const bool conditional = doc.value("conditional", false);
    PalimpsestCode code(parse_code_kind(doc.value("kind", std::string("custom"))), n, alphabet.size(), storage,
                        conditional);
    std::map<std::string, std::size_t> index;
    for (std::size_t b = 0; b < code.blocks_; ++b) index[block_name(alphabet, b, n)] = b;
    auto lookup = [&](const std::string& name) {
      auto it = index.find(name);
      if (it == index.end()) throw InputError("codebook: unknown source block '" + name + "'");
      return it->second;
    };
    auto load_row = [&](const nlohmann::json& row, std::size_t context) {
      for (const auto& [name, word] : row.items())
        code.set(lookup(name), parse_storage_string(word.get<std::string>(), storage), context);
    };
    const auto& book = doc.at("codebook");
    if (conditional) {
      for (const auto& [ctx, row] : book.items()) load_row(row, lookup(ctx));
    } else {
      load_row(book, 0);
    }
    if (doc.contains("fallback"))
      code.set_fallback(parse_storage_string(doc.at("fallback").get<std::string>(), storage));
    return code;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("codebook: ") + e.what());
  }
}

}  // namespace malleable
