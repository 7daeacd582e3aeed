#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "malleable/block_typicality.hpp"
#include "malleable/blocks.hpp"
#include "malleable/cli.hpp"
#include "malleable/code_schemes.hpp"
#include "malleable/errors.hpp"
#include "malleable/evaluator.hpp"
#include "malleable/source_io.hpp"

namespace malleable::cli {

namespace {

using Json = nlohmann::ordered_json;

Json finite_or_null(std::optional<double> v) {
  if (v && std::isfinite(*v)) return round12(*v);
  return nullptr;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

EditMetric metric_for(const JointSource& src, const std::string& name) {
  return EditMetric{parse_metric(name), src.storage_alphabet_size()};
}

Json codebook_json(const JointSource& src, const PalimpsestCode& x, const PalimpsestCode& y) {
  Json j;
  j["x"] = x.to_json(src.alphabet());
  j["y"] = y.to_json(src.alphabet());
  return j;
}

// ---- info ----

struct InfoArgs {
  std::string file;
  std::size_t max_n = 3;
};

void cmd_info(const InfoArgs& a, std::ostream& out) {
  const JointSource src = load_source(a.file);
  const int base = src.storage_alphabet_size();
  auto [px, py] = marginals(src);
  Json j;
  j["alphabet"] = src.alphabet();
  j["storage_alphabet_size"] = base;
  j["exact"] = src.exact();
  auto measures = [&](int b) {
    Json m;
    m["H_X"] = round12(entropy(px, b));
    m["H_Y"] = round12(entropy(py, b));
    m["H_XY"] = round12(joint_entropy(src, b));
    m["H_Y_given_X"] = round12(conditional_entropy(src, b));
    m["D_X_Y"] = finite_or_null(relative_entropy(px, py, b));
    m["D_Y_X"] = finite_or_null(relative_entropy(py, px, b));
    return m;
  };
  j["base_V"] = measures(base);
  if (base != 2) j["bits"] = measures(2);
  j["p_X"] = Json::array();
  j["p_Y"] = Json::array();
  for (std::size_t i = 0; i < px.size(); ++i) {
    j["p_X"].push_back(px[i].exact() ? Json(px[i].str()) : Json(round12(px[i].to_double())));
    j["p_Y"].push_back(py[i].exact() ? Json(py[i].str()) : Json(round12(py[i].to_double())));
  }
  j["stationary"] = stationary(src);
  j["mismatch_probability"] = mismatch_probability(src).str();
  Json bounds = Json::array();
  for (std::size_t n = 1; n <= a.max_n; ++n)
    bounds.push_back({{"n", n}, {"M_lower_bound", malleability_lower_bound(src, n).str()}});
  j["malleability_lower_bound"] = std::move(bounds);
  emit(out, j);
}

// ---- scheme ----

struct SchemeArgs {
  std::string file;
  std::string scheme = "huffman";
  std::size_t n = 1;
  std::string metric;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
  std::string codebook_out;
};

CodePair build_scheme(const JointSource& src, const std::string& scheme, std::size_t n) {
  if (scheme == "identity") {
    auto c = identity_code(src, n);
    return {c, c};
  }
  if (scheme == "huffman") {
    auto c = huffman(block_distribution(design_distribution(src), n), src.storage_alphabet_size(), n);
    return {c, c};
  }
  if (scheme == "incremental") return incremental_code(src, n);
  if (scheme == "ppm") {
    auto c = ppm_code(src, n);
    return {c, c};
  }
  throw InputError("unknown scheme '" + scheme + "'");
}

void cmd_scheme(const SchemeArgs& a, std::ostream& out) {
  const JointSource src = load_source(a.file);
  if (a.n == 0) throw InputError("--n must be at least 1");
  const CodePair codes = build_scheme(src, a.scheme, a.n);
  std::string metric = a.metric;
  if (metric.empty()) metric = (a.scheme == "identity" || a.scheme == "ppm") ? "hamming" : "levenshtein";
  const EditMetric m = metric_for(src, metric);
  Json j;
  j["scheme"] = a.scheme;
  j["n"] = a.n;
  j["metric"] = metric;
  if (a.samples > 0) {
    const std::uint64_t seed = a.seed.value_or(1);
    j["triple"] = to_json(evaluate_mc(src, codes.x, codes.y, m, a.samples, seed));
  } else {
    j["triple"] = to_json(evaluate_exact(src, codes.x, codes.y, m));
  }
  j["M_lower_bound"] = malleability_lower_bound(src, a.n).str();
  j["prefix_free"] = codes.x.prefix_free() && codes.y.prefix_free();
  if (!a.codebook_out.empty()) write_file(a.codebook_out, codebook_json(src, codes.x, codes.y).dump(2) + "\n");
  emit(out, j);
}

// ---- embed ----

struct EmbedArgs {
  std::string file;
  std::string host = "hypercube:3";
  std::size_t n = 1;
  std::string labels;
  std::uint64_t budget = 0;
  unsigned threads = 1;
  std::string codebook_out;
};

struct HostSpec {
  LabeledGraph graph;
  std::string kind;
  std::size_t size = 0;
};

HostSpec parse_host(const std::string& text, int storage) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("--host must be hypercube:m or levgraph:maxlen");
  const std::string kind = text.substr(0, colon);
  std::size_t size = 0;
  try {
    size = std::stoul(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw InputError("--host size must be a positive integer");
  }
  if (size == 0) throw InputError("--host size must be a positive integer");
  if (kind == "hypercube") {
    if (storage != 2) throw InputError("hypercube hosts need a binary storage alphabet");
    return {hypercube(static_cast<unsigned>(size)), kind, size};
  }
  if (kind == "levgraph") return {levenshtein_graph(storage, size), kind, size};
  throw InputError("unknown host '" + kind + "'");
}

void cmd_embed(const EmbedArgs& a, std::ostream& out) {
  const JointSource src = load_source(a.file);
  if (a.n == 0) throw InputError("--n must be at least 1");
  const HostSpec host = parse_host(a.host, src.storage_alphabet_size());
  std::string labels = a.labels;
  if (labels.empty()) labels = host.kind == "hypercube" ? "fixed" : "huffman-family";
  LabelMode mode;
  if (labels == "fixed") mode = LabelMode::fixed;
  else if (labels == "huffman-family") mode = LabelMode::huffman_family;
  else throw InputError("--labels must be fixed or huffman-family");

  const EmbeddingCode ec = embedding_code(src, a.n, host.graph, mode, SearchOptions{a.budget, a.threads});
  const std::string metric = host.kind == "hypercube" ? "hamming" : "levenshtein";
  const RateMalleabilityTriple t = evaluate_exact(src, ec.code, ec.code, metric_for(src, metric));

  Json j;
  j["host"] = a.host;
  j["n"] = a.n;
  j["labels"] = labels;
  j["metric"] = metric;
  j["cost"] = ec.embedding.cost.exact() ? Json(ec.embedding.cost.str()) : Json(round12(ec.embedding.cost.to_double()));
  j["proven_optimal"] = ec.embedding.proven_optimal;
  Json deleted = Json::array();
  for (auto [u, v] : ec.embedding.deleted_edges)
    deleted.push_back({block_name(src.alphabet(), u, a.n), block_name(src.alphabet(), v, a.n)});
  j["deleted_edges"] = std::move(deleted);
  if (mode == LabelMode::huffman_family) {
    j["family_index"] = ec.family_index;
    j["family_size"] = ec.family_size;
    j["family_truncated"] = ec.family_truncated;
  }
  j["codebook"] = ec.code.to_json(src.alphabet())["codebook"];
  j["triple"] = to_json(t);
  j["M_lower_bound"] = malleability_lower_bound(src, a.n).str();
  if (!a.codebook_out.empty()) write_file(a.codebook_out, codebook_json(src, ec.code, ec.code).dump(2) + "\n");
  emit(out, j);
}

// ---- frontier ----

struct FrontierArgs {
  std::string file;
  int grid = 21;
  std::string format = "csv";
  std::string output;
};

void cmd_frontier(const FrontierArgs& a, std::ostream& out) {
  const JointSource src = load_source(a.file);
  const int base = src.storage_alphabet_size();
  auto [px, py] = marginals(src);
  const double hx = entropy(px, base), hy = entropy(py, base);
  const auto points = rate_frontier(src, a.grid);
  std::string text;
  if (a.format == "csv") {
    std::ostringstream os;
    os << "t,K_loss,L_loss,K,L\n";
    for (const auto& p : points)
      os << format_double(p.t) << ',' << format_double(p.k_loss) << ',' << format_double(p.l_loss) << ','
         << format_double(hx + p.k_loss) << ',' << format_double(hy + p.l_loss) << '\n';
    text = os.str();
  } else if (a.format == "svg") {
    text = frontier_svg(points, hx, hy);
  } else {
    throw InputError("--out must be csv or svg");
  }
  if (a.output.empty()) out << text;
  else write_file(a.output, text);
}

// ---- block ----

struct BlockArgs {
  std::string file;
  std::size_t n = 4;
  std::string delta = "auto";
  std::optional<std::size_t> nK;
  unsigned threads = 1;
  std::string graph_out;
};

void cmd_block(const BlockArgs& a, std::ostream& out) {
  const JointSource src = load_source(a.file);
  TypicalityConfig cfg;
  cfg.block_n = a.n;
  cfg.threads = a.threads;
  if (a.delta != "auto") {
    try {
      cfg.delta = std::stod(a.delta);
    } catch (const std::exception&) {
      throw InputError("--delta must be auto or a number");
    }
  }
  const TypicalityGraph tg = typicality_graph(src, cfg);
  Json j;
  j["report"] = to_json(tg.report);
  if (a.nK) {
    const CostCheck c = exponential_cost_check(src, cfg, *a.nK, &tg.report);
    j["cost_check"] = {{"nK", c.nK},
                       {"required", round12(c.required)},
                       {"analytic_ok", c.analytic_ok},
                       {"vertex_ok", *c.vertex_ok},
                       {"degree_ok", *c.degree_ok},
                       {"verdict", c.verdict}};
  }
  if (!a.graph_out.empty()) {
    std::ofstream f(a.graph_out);
    if (!f) throw InputError("cannot write " + a.graph_out);
    write_edge_list(f, tg.graph);
  }
  emit(out, j);
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string file;
  std::string codebook;
  std::string metric = "levenshtein";
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
};

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const JointSource src = load_source(a.file);
  std::ifstream in(a.codebook);
  if (!in) throw InputError("cannot open " + a.codebook);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    throw InputError(a.codebook + ": malformed JSON");
  }
  if (!doc.contains("x")) throw InputError(a.codebook + ": missing \"x\" code");
  const PalimpsestCode cx = PalimpsestCode::from_json(doc["x"], src.alphabet());
  const PalimpsestCode cy = doc.contains("y") ? PalimpsestCode::from_json(doc["y"], src.alphabet()) : cx;
  const EditMetric m = metric_for(src, a.metric);
  Json j;
  j["metric"] = a.metric;
  if (a.samples > 0) j["triple"] = to_json(evaluate_mc(src, cx, cy, m, a.samples, a.seed.value_or(1)));
  else j["triple"] = to_json(evaluate_exact(src, cx, cy, m));
  j["M_lower_bound"] = malleability_lower_bound(src, cx.block_n()).str();
  emit(out, j);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Malleable coding toolkit"};
  app.require_subcommand(1);

  InfoArgs info;
  auto* c_info = app.add_subcommand("info", "Information measures and malleability bounds of a source");
  c_info->add_option("file", info.file, "Source JSON")->required();
  c_info->add_option("--max-n", info.max_n, "Largest block length for the bound table");

  SchemeArgs scheme;
  auto* c_scheme = app.add_subcommand("scheme", "Evaluate a coding scheme");
  c_scheme->add_option("file", scheme.file, "Source JSON")->required();
  c_scheme->add_option("--scheme", scheme.scheme, "identity|huffman|incremental|ppm")
      ->check(CLI::IsMember({"identity", "huffman", "incremental", "ppm"}));
  c_scheme->add_option("--n", scheme.n, "Block length");
  c_scheme->add_option("--metric", scheme.metric, "hamming|extended_hamming|levenshtein");
  c_scheme->add_option("--seed", scheme.seed, "Seed for sampling");
  c_scheme->add_option("--samples", scheme.samples, "Monte Carlo samples (0 = exact)");
  c_scheme->add_option("--codebook-out", scheme.codebook_out, "Write the codebook JSON here");

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed", "Embed the adjacency graph into a host graph");
  c_embed->add_option("file", embed.file, "Source JSON")->required();
  c_embed->add_option("--host", embed.host, "hypercube:m or levgraph:maxlen");
  c_embed->add_option("--n", embed.n, "Block length");
  c_embed->add_option("--labels", embed.labels, "fixed|huffman-family");
  c_embed->add_option("--budget", embed.budget, "Search node budget (0 = unlimited)");
  c_embed->add_option("--threads", embed.threads, "Search threads");
  c_embed->add_option("--codebook-out", embed.codebook_out, "Write the codebook JSON here");

  FrontierArgs frontier;
  auto* c_frontier = app.add_subcommand("frontier", "Rate-loss frontier along the geometric path");
  c_frontier->add_option("file", frontier.file, "Source JSON")->required();
  c_frontier->add_option("--grid", frontier.grid, "Number of t values");
  c_frontier->add_option("--out", frontier.format, "csv|svg");
  c_frontier->add_option("--output", frontier.output, "Write to this file instead of stdout");

  BlockArgs block;
  auto* c_block = app.add_subcommand("block", "Typicality graph report");
  c_block->add_option("file", block.file, "Source JSON")->required();
  c_block->add_option("--n", block.n, "Block length");
  c_block->add_option("--delta", block.delta, "auto or a value");
  c_block->add_option("--nK", block.nK, "Storage symbols per block to check");
  c_block->add_option("--threads", block.threads, "Worker threads");
  c_block->add_option("--graph-out", block.graph_out, "Write the graph as an edge list");

  EvaluateArgs evaluate;
  auto* c_eval = app.add_subcommand("evaluate", "Evaluate a saved codebook");
  c_eval->add_option("file", evaluate.file, "Source JSON")->required();
  c_eval->add_option("--codebook", evaluate.codebook, "Codebook JSON")->required();
  c_eval->add_option("--metric", evaluate.metric, "hamming|extended_hamming|levenshtein");
  c_eval->add_option("--seed", evaluate.seed, "Seed for sampling");
  c_eval->add_option("--samples", evaluate.samples, "Monte Carlo samples (0 = exact)");

  std::vector<std::string> argv_store{"malleable"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*c_info) cmd_info(info, out);
    else if (*c_scheme) cmd_scheme(scheme, out);
    else if (*c_embed) cmd_embed(embed, out);
    else if (*c_frontier) cmd_frontier(frontier, out);
    else if (*c_block) cmd_block(block, out);
    else if (*c_eval) cmd_evaluate(evaluate, out);
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace malleable::cli
