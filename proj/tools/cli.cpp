// Copyright 2026 The qosalloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

#include "qosalloc/allocator.hpp"
#include "qosalloc/codec.hpp"
#include "qosalloc/error.hpp"
#include "qosalloc/source_format.hpp"

namespace qosalloc::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string engine = "float";
  std::uint64_t seed = 1;
};

// Failure that maps onto an exit status; the message is already user-facing.
struct CommandFailure {
  int status;
  std::string message;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandFailure{kDataError, "cannot read " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  const auto text = read_text(path);
  return {text.begin(), text.end()};
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CommandFailure{kDataError, "cannot write " + path};
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw CommandFailure{kDataError, "write failed for " + path};
}

void write_words(const std::string& path, std::span<const std::uint16_t> words) {
  const auto bytes = to_bytes(words);
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

bool looks_like_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[2] = {};
  return in.read(magic, 2) && static_cast<std::uint8_t>(magic[0]) == (kImageMagic & 0xFF) &&
         static_cast<std::uint8_t>(magic[1]) == (kImageMagic >> 8);
}

SourceDocument load_source(const std::string& path) {
  const auto text = read_text(path);
  try {
    return parse_source(text);
  } catch (const SyntaxError& e) {
    throw CommandFailure{kDataError, path + ":" + std::to_string(e.line()) + ": " + e.what()};
  }
}

std::pair<CaseBase, RangeTable> load_image(const std::string& path) {
  return unpack_case_base(PackedImage{from_bytes(read_bytes(path))});
}

// A .qrq file, a source file (its request at `index`), or inline "TYPE:ID=VALUE@WEIGHT,...".
Request load_request(const std::string& arg, std::size_t index) {
  if (fs::is_regular_file(arg)) {
    if (fs::path(arg).extension() == ".qrq") return unpack_request(from_bytes(read_bytes(arg)));
    auto doc = load_source(arg);
    if (index >= doc.requests.size()) {
      throw CommandFailure{kDataError, arg + " has no request #" + std::to_string(index)};
    }
    return doc.requests[index];
  }
  const auto colon = arg.find(':');
  if (colon == std::string::npos) throw CommandFailure{kUsageError, "no such request file: " + arg};
  std::string text = "request " + arg.substr(0, colon) + "\n";
  std::istringstream items(arg.substr(colon + 1));
  for (std::string item; std::getline(items, item, ',');) {
    const auto eq = item.find('=');
    const auto at = item.find('@');
    if (eq == std::string::npos || at == std::string::npos || at < eq) {
      throw CommandFailure{kUsageError, "inline request item '" + item + "' is not ID=VALUE@WEIGHT"};
    }
    text += "want " + item.substr(0, eq) + " " + item.substr(eq + 1, at - eq - 1) + " " + item.substr(at + 1) + "\n";
  }
  try {
    auto doc = parse_source(text);
    return doc.requests.at(0);
  } catch (const SyntaxError& e) {
    throw CommandFailure{kUsageError, std::string("inline request: ") + e.what()};
  }
}

EngineKind parse_engine(const std::string& name) {
  if (name == "float") return EngineKind::FloatReference;
  if (name == "fixed") return EngineKind::FixedQ16;
  throw CommandFailure{kUsageError, "--engine must be 'float' or 'fixed'"};
}

std::string format_similarity(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << s;
  return os.str();
}

void print_stats(std::ostream& err, const RetrievalStats& stats) {
  err << "stats\twords_read=" << stats.words_read << "\tcomparisons=" << stats.comparisons
      << "\tmultiplications=" << stats.multiplications << '\n';
}

bool print_report(std::ostream& err, const ValidationReport& report, std::string_view scope) {
  for (const auto& v : report.violations) {
    err << scope << ": " << to_string(v.kind) << " at " << v.path << ": " << v.message << '\n';
  }
  return report.ok();
}

void print_layout(std::ostream& out, const ImageLayout& layout) {
  out << "header " << layout.header << " words, types " << layout.type_list << ", impl lists "
      << layout.impl_lists << ", attr lists " << layout.attr_lists << ", range table " << layout.range_table
      << " (" << layout.total_words() << " words)\n";
}

// Declared ranges if present, else ranges derived from the data.
RangeTable effective_ranges(const SourceDocument& doc) {
  if (!doc.ranges.entries.empty()) return doc.ranges;
  return build_range_table(std::span(&doc.case_base, 1), doc.requests);
}

int cmd_build(const std::string& source, const std::string& output, const std::string& requests_prefix,
              std::ostream& out, std::ostream& err) {
  const auto doc = load_source(source);
  bool ok = print_report(err, validate_case_base(doc.case_base), source);
  const RangeTable rt = effective_ranges(doc);
  if (doc.ranges.entries.empty()) err << source << ": no range lines; range table derived from data\n";
  ok = print_report(err, validate_range_table(rt, &doc.case_base, doc.requests), source) && ok;
  if (!ok) return kDataError;

  const auto img = pack_case_base(doc.case_base, rt);
  write_words(output, img.words);
  out << "wrote " << output << ": " << img.size_bytes() << " bytes\n";
  print_layout(out, image_layout(doc.case_base, rt));

  if (!requests_prefix.empty()) {
    for (std::size_t r = 0; r < doc.requests.size(); ++r) {
      const auto req = validate_request(doc.requests[r], WeightPolicy::Strict);
      const auto packed = pack_request(req);
      const auto path = requests_prefix + std::to_string(r) + ".qrq";
      write_words(path, packed.words);
      out << "wrote " << path << ": " << packed.size_bytes() << " bytes\n";
    }
  }
  return kSuccess;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  bool ok = true;
  if (fs::path(path).extension() == ".qrq") {
    const auto req = unpack_request(from_bytes(read_bytes(path)));
    validate_request(req, WeightPolicy::Strict);
    if (!q15_weight_sum_ok(req)) {
      err << path << ": Q15 weight sum outside tolerance\n";
      ok = false;
    }
  } else if (looks_like_image(path)) {
    const auto [cb, rt] = load_image(path);
    ok = print_report(err, validate_case_base(cb), path);
    ok = print_report(err, validate_range_table(rt, &cb), path) && ok;
  } else {
    const auto doc = load_source(path);
    ok = print_report(err, validate_case_base(doc.case_base), path);
    if (!doc.ranges.entries.empty()) {
      ok = print_report(err, validate_range_table(doc.ranges, &doc.case_base, doc.requests), path) && ok;
    }
    for (const auto& req : doc.requests) validate_request(req, WeightPolicy::Strict);
  }
  if (!ok) return kDataError;
  out << path << ": ok\n";
  return kSuccess;
}

int cmd_ranges(const std::string& source, bool declared, std::ostream& out) {
  const auto doc = load_source(source);
  const RangeTable rt = declared ? doc.ranges : build_range_table(std::span(&doc.case_base, 1), doc.requests);
  out << "id\tlower\tupper\td_max\trecip_q16\n";
  for (const auto& e : rt.entries) {
    out << e.id.value << '\t' << e.lower << '\t' << e.upper << '\t' << e.d_max << '\t' << e.recip_q16 << '\n';
  }
  return kSuccess;
}

int cmd_gen(const GenSpec& spec, const std::string& output, std::ostream& out, std::ostream& err) {
  try {
    check_gen_spec(spec);
  } catch (const Error& e) {
    throw CommandFailure{kUsageError, e.what()};
  }
  const auto doc = generate_library(spec);
  const auto text = emit_source(doc);
  std::ostream& summary = output.empty() ? err : out;
  if (output.empty()) {
    out << text;
  } else {
    write_file(output, text);
    summary << "wrote " << output << '\n';
  }
  const auto layout = image_layout(doc.case_base, doc.ranges);
  summary << "packed size: " << layout.total_bytes() << " bytes\n";
  print_layout(summary, layout);
  return kSuccess;
}

Request checked_request(const Request& req, bool normalize) {
  return validate_request(req, normalize ? WeightPolicy::Normalize : WeightPolicy::Strict);
}

int cmd_retrieve(const std::string& image, const Request& req, EngineKind engine, std::size_t n,
                 double threshold, std::ostream& out, std::ostream& err) {
  const auto [cb, rt] = load_image(image);
  const auto ranked = retrieve_n_best(cb, rt, req, n, threshold, engine);
  for (std::size_t k = 0; k < ranked.results.size(); ++k) {
    out << (k + 1) << '\t' << ranked.results[k].impl_id.value << '\t'
        << format_similarity(ranked.results[k].similarity_f) << '\n';
  }
  print_stats(err, ranked.stats);
  return kSuccess;
}

ConfigRepository load_repository(const std::string& path) {
  std::istringstream in(read_text(path));
  std::vector<std::pair<ImplKey, std::string>> entries;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    unsigned type = 0;
    unsigned impl = 0;
    std::string ref;
    if (!(ls >> type)) continue;
    if (!(ls >> impl >> ref) || type == 0 || impl == 0 || type > 65535 || impl > 65535) {
      throw CommandFailure{kDataError, path + ":" + std::to_string(line_no) + ": expected '<type_id> <impl_id> <ref>'"};
    }
    entries.push_back({{FunctionTypeId(static_cast<std::uint16_t>(type)), ImplId(static_cast<std::uint16_t>(impl))}, ref});
  }
  return ConfigRepository(std::move(entries));
}

int cmd_allocate(const std::string& image, const Request& req, const std::string& snapshot_path,
                 const std::string& repo_path, EngineKind engine, std::size_t n, double threshold,
                 std::ostream& out, std::ostream& err) {
  const auto [cb, rt] = load_image(image);
  ResourceSnapshot snapshot;
  try {
    snapshot = parse_snapshot(read_text(snapshot_path));
  } catch (const SyntaxError& e) {
    throw CommandFailure{kDataError, snapshot_path + ":" + std::to_string(e.line()) + ": " + e.what()};
  }

  AllocationManager manager;
  const auto decision = manager.allocate(cb, rt, req, snapshot, n, threshold, engine);
  if (decision.chosen) {
    out << "chosen\t" << decision.chosen->impl_id.value << '\t' << format_similarity(decision.chosen->similarity_f)
        << '\n';
  } else {
    out << "chosen\tnone\n";
    err << "no feasible implementation; retry with relaxed constraints\n";
  }
  for (const auto& alt : decision.alternatives) {
    out << "alternative\t" << alt.impl_id.value << '\t' << format_similarity(alt.similarity_f) << '\n';
  }
  for (const auto id : decision.rejected_infeasible) out << "rejected\t" << id.value << '\n';
  if (decision.token) {
    out << "token\t" << decision.token->type_id.value << '\t' << decision.token->impl_id.value << '\t'
        << format_similarity(decision.token->similarity) << '\t' << decision.token->sequence << '\n';
  }
  if (!repo_path.empty() && decision.chosen) {
    const auto repo = load_repository(repo_path);
    out << "config\t" << repo.config_ref(decision.chosen->type_id, decision.chosen->impl_id) << '\n';
  }
  print_stats(err, decision.stats);
  return kSuccess;
}

int cmd_oracle_check(const OracleCheckOptions& options, std::ostream& out, std::ostream& err) {
  if (options.trials == 0) throw CommandFailure{kUsageError, "--trials must be at least 1"};
  try {
    check_gen_spec(options.spec);
  } catch (const Error& e) {
    throw CommandFailure{kUsageError, e.what()};
  }
  const auto summary = oracle_check(options);
  out << "trials\t" << summary.trials << '\n'
      << "float_oracle_matches\t" << summary.float_matches << '\n'
      << "argmax_checked\t" << summary.argmax_checked << '\n'
      << "argmax_agreed\t" << summary.argmax_agreed << '\n'
      << "max_fixed_deviation\t" << std::scientific << std::setprecision(3) << summary.max_deviation << '\n';
  for (const auto& v : summary.violations) err << "violation: " << v << '\n';
  if (!summary.violations.empty()) {
    err << "reproduce with: oracle-check --seed <seed> --trials 1 (same size flags)\n";
    return kInvariantFailure;
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"QoS-driven function allocation over a packed case-base", "qosalloc"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--engine", global.engine, "Similarity engine: float or fixed")
      ->check(CLI::IsMember({"float", "fixed"}))
      ->capture_default_str();
  app.add_option("--seed", global.seed, "Random seed for gen and oracle-check")->capture_default_str();
  app.fallthrough();

  std::string source, output, requests_prefix, path, image, request_arg, snapshot, repo;
  std::size_t n = kAllResults;
  std::size_t request_index = 0;
  double threshold = 0.0;
  bool declared = false;
  bool normalize = false;

  auto* build = app.add_subcommand("build", "Pack a text source into a .qcb image");
  build->add_option("source", source, "Text source file")->required();
  build->add_option("-o,--output", output, "Output .qcb path")->required();
  build->add_option("--requests-out", requests_prefix, "Also pack each request to <prefix><index>.qrq");

  auto* validate = app.add_subcommand("validate", "Check a .qcb image, .qrq request or text source");
  validate->add_option("path", path, "File to check")->required();

  auto* ranges = app.add_subcommand("ranges", "List the range table of a text source");
  ranges->add_option("source", source, "Text source file")->required();
  ranges->add_flag("--declared", declared, "List the declared table instead of deriving one from the data");

  GenSpec spec;
  auto* gen = app.add_subcommand("gen", "Generate a random library as text source");
  gen->add_option("-o,--output", output, "Output path (stdout if omitted)");
  gen->add_option("--types", spec.types)->capture_default_str();
  gen->add_option("--impls", spec.impls_per_type)->capture_default_str();
  gen->add_option("--attrs", spec.attrs_per_impl)->capture_default_str();
  gen->add_option("--value-bound", spec.value_bound)->capture_default_str();
  gen->add_option("--attr-pool", spec.attr_pool, "Attribute id pool size (0: attrs + 2)")->capture_default_str();
  gen->add_option("--requests", spec.requests)->capture_default_str();

  auto add_query_options = [&](CLI::App* cmd) {
    cmd->add_option("image", image, ".qcb image")->required();
    cmd->add_option("request", request_arg, ".qrq file, text source, or inline TYPE:ID=VALUE@WEIGHT,...")
        ->required();
    cmd->add_option("--n", n, "Number of results to keep");
    cmd->add_option("--threshold", threshold, "Drop results below this similarity")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--request-index", request_index, "Which request of a text source to use")
        ->capture_default_str();
    cmd->add_flag("--normalize", normalize, "Rescale weights to sum to 1 instead of rejecting");
  };
  auto* retrieve = app.add_subcommand("retrieve", "Rank implementations for a request");
  add_query_options(retrieve);

  auto* allocate = app.add_subcommand("allocate", "Rank, filter by feasibility and issue a bypass token");
  add_query_options(allocate);
  allocate->add_option("snapshot", snapshot, "Resource snapshot file")->required();
  allocate->add_option("--repo", repo, "Configuration repository: '<type_id> <impl_id> <ref>' lines");

  OracleCheckOptions oracle;
  oracle.spec.types = 8;
  oracle.spec.impls_per_type = 8;
  oracle.spec.attrs_per_impl = 8;
  oracle.spec.value_bound = 1024;
  auto* check = app.add_subcommand("oracle-check", "Cross-check both engines against a brute-force oracle");
  check->add_option("--trials", oracle.trials)->capture_default_str();
  check->add_option("--types", oracle.spec.types, "Upper bound per trial")->capture_default_str();
  check->add_option("--impls", oracle.spec.impls_per_type, "Upper bound per trial")->capture_default_str();
  check->add_option("--attrs", oracle.spec.attrs_per_impl, "Upper bound per trial")->capture_default_str();
  check->add_option("--value-bound", oracle.spec.value_bound)->capture_default_str();
  check->add_option("--attr-pool", oracle.spec.attr_pool)->capture_default_str();
  check->add_option("--image", oracle.image_path, "Draw requests against this .qcb image");

  std::vector<std::string> argv_rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "qosalloc: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    const auto query_request = [&] { return checked_request(load_request(request_arg, request_index), normalize); };
    if (*build) return cmd_build(source, output, requests_prefix, out, err);
    if (*validate) return cmd_validate(path, out, err);
    if (*ranges) return cmd_ranges(source, declared, out);
    if (*gen) {
      spec.seed = global.seed;
      return cmd_gen(spec, output, out, err);
    }
    if (*retrieve) {
      return cmd_retrieve(image, query_request(), parse_engine(global.engine), n, threshold, out, err);
    }
    if (*allocate) {
      return cmd_allocate(image, query_request(), snapshot, repo, parse_engine(global.engine), n, threshold, out,
                          err);
    }
    if (*check) {
      oracle.spec.seed = global.seed;
      return cmd_oracle_check(oracle, out, err);
    }
  } catch (const CommandFailure& f) {
    err << "qosalloc: " << f.message << '\n';
    return f.status;
  } catch (const Error& e) {
    err << "qosalloc: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "qosalloc: internal error: " << e.what() << '\n';
    return kInvariantFailure;
  }
  return kUsageError;
}

}  // namespace qosalloc::cli
