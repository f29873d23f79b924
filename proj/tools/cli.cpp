/*
 * Copyright 2026 The mpembed Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpembed/embedding_io.hpp"
#include "mpembed/error.hpp"
#include "mpembed/eval.hpp"
#include "mpembed/hin.hpp"
#include "mpembed/meta_path.hpp"
#include "mpembed/sampler.hpp"
#include "mpembed/search.hpp"
#include "mpembed/trainer.hpp"

namespace mpembed::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

struct Inputs {
  Json digests = Json::object();

  std::string read(const std::string& path) {
    auto data = read_file(path);
    digests[path] = sha256_hex(data);
    return data;
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

Json manifest(const std::string& command, Json config, const Inputs& inputs,
              std::optional<std::uint64_t> seed, double seconds, Json outputs) {
  Json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["config"] = std::move(config);
  m["inputs"] = inputs.digests;
  if (seed) m["seed"] = *seed;
  m["wall_seconds"] = seconds;
  m["outputs"] = std::move(outputs);
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Hin load_network(Inputs& inputs, const std::string& schema, const std::string& vertices,
                 const std::string& edges) {
  auto s = inputs.read(schema);
  auto v = inputs.read(vertices);
  auto e = inputs.read(edges);
  return Hin::load(s, v, e);
}

/// `A-P-A:0.3` -> ("A-P-A", 0.3); a spec without a weight gets 1.
std::pair<std::string, double> split_weight(const std::string& arg) {
  auto colon = arg.rfind(':');
  if (colon == std::string::npos) return {arg, 1.0};
  const std::string tail = arg.substr(colon + 1);
  std::size_t used = 0;
  double w = 0.0;
  try {
    w = std::stod(tail, &used);
  } catch (const std::exception&) {
    throw Error("bad meta-path weight in '" + arg + "'");
  }
  if (used != tail.size()) throw Error("bad meta-path weight in '" + arg + "'");
  return {arg.substr(0, colon), w};
}

std::unordered_map<std::string, std::string> vertex_type_map(const std::string& text) {
  std::unordered_map<std::string, std::string> types;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("vertex-types", line_no, "expected `vertex_id<TAB>type`");
    types[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return types;
}

// ---------------------------------------------------------------- train

struct TrainFlags {
  std::string schema, edges, vertex_types, out, mode;
  std::vector<std::string> meta_paths;
  std::size_t dim = 50;
  std::size_t neg = 5;
  double gamma = 0.75;
  std::uint64_t samples = 1'000'000;
  double lr = 0.25;
  std::optional<double> lr_floor;
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed;
  bool symmetric = false;
  std::uint64_t chunk = 10'000;
  bool quiet = false;
};

void add_train(CLI::App& app, TrainFlags& f) {
  auto* cmd = app.add_subcommand("train", "train vertex embeddings guided by meta-paths");
  cmd->add_option("--schema", f.schema, "schema file")->required();
  cmd->add_option("--edges", f.edges, "edge TSV")->required();
  cmd->add_option("--vertex-types", f.vertex_types, "vertex-type TSV")->required();
  cmd->add_option("--meta-path", f.meta_paths, "meta-path spec, optionally `:weight`; repeatable")
      ->required();
  cmd->add_option("--mode", f.mode, "loss: seq or pair")
      ->required()
      ->check(CLI::IsMember({"seq", "pair"}));
  cmd->add_option("--out", f.out, "embedding output path")->required();
  cmd->add_option("--dim", f.dim, "embedding dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--neg", f.neg, "negative samples per positive")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", f.gamma, "popularity exponent");
  cmd->add_option("--samples", f.samples, "positive samples to process")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr", f.lr, "initial learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--lr-floor", f.lr_floor, "final learning rate (default 1e-4 * lr)");
  cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "random seed (default: system entropy)");
  cmd->add_option("--chunk", f.chunk, "samples claimed per worker at a time")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--symmetric", f.symmetric, "tie p and q so scores are symmetric");
  cmd->add_flag("--quiet", f.quiet, "no progress lines");
}

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  Inputs inputs;
  Hin hin = load_network(inputs, f.schema, f.vertex_types, f.edges);

  TrainConfig cfg;
  for (const auto& arg : f.meta_paths) {
    auto [spec, weight] = split_weight(arg);
    cfg.meta_paths.push_back(WeightedMetaPath{parse_meta_path(spec, hin), weight});
  }
  if (normalize_weights(cfg.meta_paths)) {
    err << "warning: meta-path weights do not sum to 1; normalized to";
    for (const auto& wp : cfg.meta_paths) err << ' ' << wp.path.render() << ':' << wp.weight;
    err << '\n';
  }
  cfg.mode = f.mode == "seq" ? LossMode::kSequential : LossMode::kPairwise;
  cfg.dim = f.dim;
  cfg.negatives = f.neg;
  cfg.gamma = f.gamma;
  cfg.total_samples = f.samples;
  cfg.lr_init = f.lr;
  cfg.lr_floor = f.lr_floor;
  cfg.threads = f.threads;
  cfg.seed = resolve_seed(f.seed);
  cfg.symmetric = f.symmetric;
  cfg.chunk_size = f.chunk;

  ProgressFn progress;
  if (!f.quiet) {
    progress = [&err](std::uint64_t n, double lr, double loss) {
      err << "samples=" << n << " lr=" << lr << " window_loss=" << loss << '\n';
    };
  }
  TrainResult result = train(hin, cfg, progress);

  std::ostringstream emb;
  write_embeddings(embeddings_of(hin, result.params), emb);
  write_file(f.out, emb.str());
  std::ostringstream bias;
  write_bias(result.params, bias);
  const std::string bias_path = f.out + ".bias";
  write_file(bias_path, bias.str());

  Json config;
  Json paths = Json::array();
  for (const auto& wp : cfg.meta_paths)
    paths.push_back({{"meta_path", wp.path.render()}, {"weight", wp.weight}});
  config["meta_paths"] = paths;
  config["mode"] = f.mode;
  config["dim"] = cfg.dim;
  config["negatives"] = cfg.negatives;
  config["gamma"] = cfg.gamma;
  config["samples"] = cfg.total_samples;
  config["lr_init"] = cfg.lr_init;
  config["lr_floor"] = cfg.effective_lr_floor();
  config["threads"] = cfg.threads;
  config["chunk"] = cfg.chunk_size;
  config["symmetric"] = cfg.symmetric;
  Json outputs = {{"embeddings", f.out}, {"bias", bias_path}};
  auto m = manifest("train", config, inputs, cfg.seed, seconds_since(t0), outputs);
  m["report"] = Json::parse(result.report.to_json());
  write_file(f.out + ".manifest.json", m.dump(2) + "\n");

  out << result.report.to_json() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- search

struct SearchFlags {
  std::string embeddings, query;
  std::size_t k = 10;
  std::optional<std::string> type;
  std::optional<std::string> vertex_types;
};

void add_search(CLI::App& app, SearchFlags& f) {
  auto* cmd = app.add_subcommand("search", "top-k most similar vertices by cosine");
  cmd->add_option("--embeddings", f.embeddings, "embedding file")->required();
  cmd->add_option("--query", f.query, "query vertex id")->required();
  cmd->add_option("--k", f.k, "number of results")->required()->check(CLI::PositiveNumber);
  auto* types = cmd->add_option("--vertex-types", f.vertex_types, "vertex-type TSV");
  cmd->add_option("--type", f.type, "only return vertices of this type")->needs(types);
}

int cmd_search(const SearchFlags& f, std::ostream& out, std::ostream&) {
  auto table = read_embeddings(read_file(f.embeddings));
  std::unordered_map<std::string, std::string> types;
  if (f.vertex_types) types = vertex_type_map(read_file(*f.vertex_types));
  SimilarityIndex index(table, types);
  auto hits = top_k(index, f.query, f.k, f.type);
  out << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < hits.size(); ++i)
    out << (i + 1) << '\t' << hits[i].vertex << '\t' << hits[i].similarity << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalFlags {
  std::string embeddings, labels;
};

void add_eval(CLI::App& app, EvalFlags& f) {
  auto* cmd = app.add_subcommand("eval", "grouping AUC of cosine similarity");
  cmd->add_option("--embeddings", f.embeddings, "embedding file")->required();
  cmd->add_option("--labels", f.labels, "label TSV `vertex_id<TAB>group`")->required();
}

int cmd_eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
  auto table = read_embeddings(read_file(f.embeddings));
  SimilarityIndex index(table);
  if (!index.excluded().empty())
    err << "warning: " << index.excluded().size() << " zero embedding(s) left out of the index\n";
  auto labels = Grouping::parse(read_file(f.labels));
  out << "AUC=" << std::fixed << std::setprecision(4) << auc(index, labels) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- counts

struct CountsFlags {
  std::string schema, edges, vertex_types, meta_path;
  std::optional<std::string> out;
};

void add_counts(CLI::App& app, CountsFlags& f) {
  auto* cmd = app.add_subcommand("counts", "dump path-instance counts per vertex and position");
  cmd->add_option("--schema", f.schema, "schema file")->required();
  cmd->add_option("--edges", f.edges, "edge TSV")->required();
  cmd->add_option("--vertex-types", f.vertex_types, "vertex-type TSV")->required();
  cmd->add_option("--meta-path", f.meta_path, "meta-path spec")->required();
  cmd->add_option("--out", f.out, "write TSV here instead of standard output");
}

int cmd_counts(const CountsFlags& f, std::ostream& out, std::ostream&) {
  const auto t0 = std::chrono::steady_clock::now();
  Inputs inputs;
  Hin hin = load_network(inputs, f.schema, f.vertex_types, f.edges);
  auto m = parse_meta_path(f.meta_path, hin);
  auto counts = precompute_counts(hin, m);
  std::ostringstream tsv;
  counts.write_tsv(hin, tsv);
  if (!f.out) {
    out << tsv.str();
    return kExitOk;
  }
  write_file(*f.out, tsv.str());
  Json config = {{"meta_path", m.render()}};
  write_file(*f.out + ".manifest.json",
             manifest("counts", config, inputs, std::nullopt, seconds_since(t0),
                      Json{{"counts", *f.out}})
                     .dump(2) +
                 "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthFlags {
  std::string out_dir;
  SyntheticSpec spec;
  std::optional<std::uint64_t> seed;
};

void add_synth(CLI::App& app, SynthFlags& f) {
  auto* cmd = app.add_subcommand("synth", "write a planted-community A/P/V network");
  cmd->add_option("--out-dir", f.out_dir, "output directory")->required();
  cmd->add_option("--communities", f.spec.communities)->check(CLI::PositiveNumber);
  cmd->add_option("--authors", f.spec.authors_per_community, "authors per community")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--venues", f.spec.venues_per_community, "venues per community")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--papers", f.spec.papers_per_author, "papers per author")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--noise", f.spec.noise, "probability a venue ignores the community")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", f.seed, "random seed (default: system entropy)");
}

int cmd_synth(SynthFlags f, std::ostream&, std::ostream&) {
  const auto t0 = std::chrono::steady_clock::now();
  f.spec.seed = resolve_seed(f.seed);
  auto data = generate_planted_hin(f.spec);
  fs::create_directories(f.out_dir);
  const fs::path dir(f.out_dir);
  const Json outputs = {{"schema", (dir / "schema.txt").string()},
                        {"vertex_types", (dir / "vertices.tsv").string()},
                        {"edges", (dir / "edges.tsv").string()},
                        {"labels", (dir / "labels.tsv").string()}};
  write_file(outputs["schema"].get<std::string>(), data.schema_text);
  write_file(outputs["vertex_types"].get<std::string>(), data.vertex_text);
  write_file(outputs["edges"].get<std::string>(), data.edge_text);
  write_file(outputs["labels"].get<std::string>(), data.grouping.to_text());
  Json config = {{"communities", f.spec.communities},
                 {"authors_per_community", f.spec.authors_per_community},
                 {"venues_per_community", f.spec.venues_per_community},
                 {"papers_per_author", f.spec.papers_per_author},
                 {"noise", f.spec.noise}};
  Json m = manifest("synth", config, Inputs{}, f.spec.seed, seconds_since(t0), outputs);
  // Timing stays out of this manifest so reruns are byte-identical.
  m.erase("wall_seconds");
  write_file((dir / "manifest.json").string(), m.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"meta-path guided embeddings for heterogeneous networks", "mpembed"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  TrainFlags train_flags;
  SearchFlags search_flags;
  EvalFlags eval_flags;
  CountsFlags counts_flags;
  SynthFlags synth_flags;
  add_train(app, train_flags);
  add_search(app, search_flags);
  add_eval(app, eval_flags);
  add_counts(app, counts_flags);
  add_synth(app, synth_flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "train") return cmd_train(train_flags, out, err);
    if (name == "search") return cmd_search(search_flags, out, err);
    if (name == "eval") return cmd_eval(eval_flags, out, err);
    if (name == "counts") return cmd_counts(counts_flags, out, err);
    if (name == "synth") return cmd_synth(synth_flags, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace mpembed::cli
