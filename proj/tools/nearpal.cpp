#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ingest.hpp"
#include "json.hpp"
#include "nearpal/engine_onepass.hpp"
#include "nearpal/engine_twopass.hpp"
#include "nearpal/errors.hpp"
#include "nearpal/oracle.hpp"

using json = nlohmann::json;
using namespace nearpal;
using namespace nearpal::cli;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfig = 2, kInput = 3, kInternal = 4 };

struct InputOptions {
  std::string input = "-";
  std::string format = "raw";
  std::string alphabet = "dna";
  std::string complement;
  std::optional<u64> length;
};

struct EngineOptions {
  std::string mode = "mult";
  u64 d = 0;
  double epsilon = 0.5;
  u64 E = 16;
  bool no_doubling = false;
  std::optional<u64> seed;
  u64 window = 0;
};

void add_input_flags(CLI::App* app, InputOptions& o) {
  app->add_option("--input,-i", o.input, "input file, '-' for stdin")->capture_default_str();
  app->add_option("--format", o.format, "raw or fasta")
      ->check(CLI::IsMember({"raw", "fasta"}))
      ->capture_default_str();
  app->add_option("--alphabet", o.alphabet, "FASTA symbols: dna (ACGTN) or any")
      ->check(CLI::IsMember({"dna", "any"}))
      ->capture_default_str();
  app->add_option("--complement", o.complement, "pairing: 'dna' or a file of 'X Y' lines");
  app->add_option("--length", o.length, "stream length when reading stdin");
}

void add_engine_flags(CLI::App* app, EngineOptions& o) {
  app->add_option("--mode", o.mode, "window, mult, add or exact")
      ->check(CLI::IsMember({"window", "mult", "add", "exact"}))
      ->capture_default_str();
  app->add_option("--d", o.d, "mismatch budget")->capture_default_str();
  app->add_option("--epsilon", o.epsilon, "multiplicative error (mult)")->capture_default_str();
  app->add_option("--E", o.E, "additive error (add)")->capture_default_str();
  app->add_flag("--no-doubling", o.no_doubling, "test even lengths only");
  app->add_option("--seed", o.seed, "RNG seed (default: $NEARPAL_SEED, else 1)");
  app->add_option("--window", o.window, "window mode: window size (default: whole stream)");
}

u64 resolve_seed(const std::optional<u64>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NEARPAL_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end) throw ConfigError(std::string("NEARPAL_SEED is not an integer: ") + env);
    return v;
  }
  return 1;
}

std::optional<SymbolMap> resolve_pairing(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  if (spec == "dna") return dna_complement_map();
  return load_complement_map(spec);
}

// One-shot stdin reader for one-pass modes when the length is given.
class StdinSource : public ReplayableSource {
 public:
  explicit StdinSource(u64 n) : n_(n) {}
  u64 length() const override { return n_; }
  void replay(const std::function<void(std::uint8_t)>& sink) const override {
    if (used_) throw InternalError("stdin cannot be replayed");
    used_ = true;
    std::vector<char> buf(1 << 16);
    u64 seen = 0;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), stdin)) > 0) {
      seen += got;
      if (seen > n_) throw InputError("stdin is longer than --length");
      for (std::size_t i = 0; i < got; ++i) sink(static_cast<std::uint8_t>(buf[i]));
    }
  }

 private:
  u64 n_;
  mutable bool used_ = false;
};

struct Record {
  std::optional<std::string> header;
  std::unique_ptr<ReplayableSource> source;
};

struct Inputs {
  std::unique_ptr<TempFile> temp;
  std::vector<Record> records;
};

// Opens the input as replayable records. stdin is copied to a temporary file
// unless a one-pass run can stream it with a known length.
Inputs open_inputs(const InputOptions& o, bool need_replay) {
  Inputs in;
  std::string path = o.input;
  if (path == "-") {
    if (o.format == "raw" && o.length && !need_replay) {
      in.records.push_back({std::nullopt, std::make_unique<StdinSource>(*o.length)});
      return in;
    }
    in.temp = std::make_unique<TempFile>();
    in.temp->fill_from_stdin();
    path = in.temp->path();
  } else if (!std::filesystem::exists(path)) {
    throw InputError("no such file: " + path);
  }
  if (o.format == "raw") {
    auto src = std::make_unique<FileSource>(path);
    if (o.length && *o.length != src->length())
      throw InputError("input holds " + std::to_string(src->length()) + " bytes, --length says " +
                       std::to_string(*o.length));
    in.records.push_back({std::nullopt, std::move(src)});
    return in;
  }
  for (auto& rec : index_fasta(path, o.alphabet == "dna")) {
    std::string header = rec.header;
    in.records.push_back({header, std::make_unique<FastaRecordSource>(path, std::move(rec))});
  }
  return in;
}

Bytes materialize(const ReplayableSource& src) {
  Bytes out;
  out.reserve(src.length());
  src.replay([&](std::uint8_t c) { out.push_back(c); });
  return out;
}

json answer_json(const PalindromeAnswer& a, u64 n, const std::optional<std::string>& header) {
  json doc;
  doc["mode"] = mode_name(a.mode);
  doc["n"] = n;
  doc["d"] = a.d;
  doc["start"] = a.start;
  doc["length"] = a.length;
  doc["mismatches"] = a.mismatches;
  doc["params"] = {{"epsilon", a.epsilon}, {"E", a.E}, {"P", a.P}, {"B", a.B}, {"seed", a.seed}};
  doc["record"] = header ? json(*header) : json(nullptr);
  return doc;
}

struct RunResult {
  PalindromeAnswer answer;
  u64 n = 0;
  EngineStats one;
  TwoPassStats two;
};

RunResult run_engine(const EngineOptions& o, const ReplayableSource& src, u64 seed,
                     const std::optional<SymbolMap>& pairing) {
  const Mode mode = *parse_mode(o.mode);
  if (mode == Mode::multiplicative && !(o.epsilon > 0)) throw ConfigError("--epsilon must be positive");
  if (mode == Mode::additive && o.E < 1) throw ConfigError("--E must be at least 1");
  RunResult out;
  if (mode == Mode::exact) {
    TwoPassConfig cfg;
    cfg.d = o.d;
    cfg.n = src.length();
    cfg.seed = seed;
    cfg.doubling = !o.no_doubling;
    cfg.pairing = pairing;
    TwoPassEngine eng(cfg);
    out.answer = eng.run(src);
    out.n = src.length();
    out.two = eng.stats();
    return out;
  }
  EngineConfig cfg;
  cfg.mode = mode;
  cfg.d = o.d;
  cfg.epsilon = o.epsilon;
  cfg.E = o.E;
  cfg.n_bound = src.length();
  cfg.seed = seed;
  cfg.doubling = !o.no_doubling;
  cfg.pairing = pairing;
  cfg.window = o.window;
  OnePassEngine eng(cfg);
  u64 n = 0;
  src.replay([&](std::uint8_t c) {
    ++n;
    eng.push(c);
  });
  out.answer = eng.finalize();
  out.n = n;
  out.one = eng.stats();
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void line(const json& j) { stream() << j.dump() << '\n'; }

 private:
  std::ofstream file_;
};

int cmd_run(const InputOptions& io, const EngineOptions& eo, const std::string& output) {
  const u64 seed = resolve_seed(eo.seed);
  const auto pairing = resolve_pairing(io.complement);
  auto inputs = open_inputs(io, eo.mode == "exact");
  Output out(output);
  for (std::size_t i = 0; i < inputs.records.size(); ++i) {
    const auto& rec = inputs.records[i];
    auto res = run_engine(eo, *rec.source, seed + i, pairing);
    out.line(answer_json(res.answer, res.n, rec.header));
  }
  return kOk;
}

int cmd_verify(const InputOptions& io, const std::string& answers_path, const std::string& output) {
  const auto pairing = resolve_pairing(io.complement);
  std::ifstream answers(answers_path);
  if (!answers) throw InputError("cannot open " + answers_path);
  std::vector<json> docs;
  std::string line;
  int lineno = 0;
  while (std::getline(answers, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw InputError(answers_path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  auto inputs = open_inputs(io, false);
  if (docs.size() != inputs.records.size())
    throw InputError(std::to_string(docs.size()) + " answers for " + std::to_string(inputs.records.size()) +
                     " records");
  Output out(output);
  bool all = true;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const json& doc = docs[i];
    PalindromeAnswer a;
    try {
      a.d = doc.at("d").get<u64>();
      a.start = doc.at("start").get<u64>();
      a.length = doc.at("length").get<u64>();
      a.mismatches = doc.at("mismatches").get<std::vector<u64>>();
    } catch (const json::exception& e) {
      throw InputError("answer " + std::to_string(i + 1) + ": " + e.what());
    }
    const Bytes s = materialize(*inputs.records[i].source);
    const bool in_range = a.length == 0 || (a.start >= 1 && a.start + a.length - 1 <= s.size());
    const bool pass = verify_answer(s, a, pairing ? &*pairing : nullptr);
    json rep;
    rep["record"] = inputs.records[i].header ? json(*inputs.records[i].header) : json(nullptr);
    rep["start"] = a.start;
    rep["length"] = a.length;
    rep["ham"] = in_range && a.length
                     ? json(exact_ham_reverse(s, a.start, a.start + a.length - 1, pairing ? &*pairing : nullptr).ham)
                     : json(in_range ? json(0) : json(nullptr));
    rep["pass"] = pass;
    out.line(rep);
    all = all && pass;
  }
  return all ? kOk : kVerifyFailed;
}

struct GenOptions {
  std::string kind = "random";
  u64 n = 1024;
  u64 d = 1;
  u64 E = 16;
  std::optional<u64> target;
  unsigned sigma = 4;
  u64 pairs = 0;
  std::optional<u64> seed;
  std::string format = "raw";
  std::string output;
};

int cmd_gen(const GenOptions& g) {
  const u64 seed = resolve_seed(g.seed);
  Bytes s;
  if (g.kind == "random" || g.kind == "planted") {
    if (g.sigma < 1 || g.sigma > 4) throw ConfigError("--sigma must be in 1..4");
    std::mt19937_64 rng(seed);
    s = random_string(g.n, g.sigma, rng, "ACGT");
    if (g.kind == "planted" && g.n) {
      const u64 len = g.n / 4 + rng() % (g.n / 2 + 1);
      plant_near_palindrome(s, 1 + rng() % (g.n - len + 1), len, g.pairs, rng);
    }
  } else {
    HardInstanceSpec spec;
    spec.kind = g.kind == "mult-hard" ? HardKind::multiplicative : HardKind::additive;
    spec.n = g.n;
    spec.d = g.d;
    spec.E = g.E;
    spec.target_ham = g.target.value_or(g.d);
    spec.seed = seed;
    s = spec.kind == HardKind::multiplicative ? gen_mult_hard(spec) : gen_add_hard(spec);
  }
  Output out(g.output);
  auto& os = out.stream();
  if (g.format == "fasta") {
    os << ">nearpal " << g.kind << " n=" << g.n << " seed=" << seed << '\n';
    for (std::size_t i = 0; i < s.size(); i += 60)
      os.write(reinterpret_cast<const char*>(s.data() + i), static_cast<std::streamsize>(std::min<std::size_t>(60, s.size() - i)))
          << '\n';
  } else {
    os.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size()));
  }
  return kOk;
}

struct BenchOptions {
  std::string corpus;
  std::vector<u64> sizes{1024, 4096, 16384};
  unsigned sigma = 4;
};

int cmd_bench(const InputOptions& io, const EngineOptions& eo, const BenchOptions& bo, const std::string& output) {
  const u64 seed = resolve_seed(eo.seed);
  const auto pairing = resolve_pairing(io.complement);
  Output out(output);
  auto report = [&](const std::string& name, const ReplayableSource& src, u64 run_seed) {
    const auto t0 = std::chrono::steady_clock::now();
    auto res = run_engine(eo, src, run_seed, pairing);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json j;
    j["input"] = name;
    j["n"] = res.n;
    j["d"] = eo.d;
    j["mode"] = eo.mode;
    j["seconds"] = secs;
    j["ns_per_symbol"] = res.n ? secs * 1e9 / static_cast<double>(res.n) : 0.0;
    j["length"] = res.answer.length;
    if (eo.mode == "exact") {
      j["checkpoints_kept"] = res.two.checkpoints_kept;
      j["peak_buffer"] = res.two.peak_buffer;
      j["midpoints"] = res.two.midpoints;
      j["gap_entries"] = res.two.gap_entries;
      j["nearpal_calls"] = res.two.nearpal_calls;
    } else {
      j["peak_fingerprint_words"] = res.one.peak_fingerprint_words;
      j["log_words"] = res.one.log_words;
      j["peak_checkpoints"] = res.one.peak_checkpoints;
      j["nearpal_calls"] = res.one.nearpal_calls;
      if (eo.mode == "mult") j["checkpoint_bound"] = MultiplicativeSchedule(eo.epsilon, std::max<u64>(res.n, 1)).capacity() + 1;
      if (eo.mode == "add") j["checkpoint_bound"] = res.n / std::max<u64>(1, eo.E / 2) + 1;
    }
    out.line(j);
  };
  if (!bo.corpus.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(bo.corpus))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (std::size_t i = 0; i < files.size(); ++i) report(files[i].string(), FileSource(files[i].string()), seed + i);
    return kOk;
  }
  if (io.input != "-" || io.length) {
    auto inputs = open_inputs(io, eo.mode == "exact");
    for (std::size_t i = 0; i < inputs.records.size(); ++i)
      report(inputs.records[i].header.value_or(io.input), *inputs.records[i].source, seed + i);
    return kOk;
  }
  std::mt19937_64 rng(seed);
  for (u64 n : bo.sizes) report("random-" + std::to_string(n), MemorySource(random_string(n, bo.sigma, rng, "ACGT")), seed);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Longest d-near-palindrome in a symbol stream"};
  app.require_subcommand(1);

  InputOptions run_in;
  EngineOptions run_eng;
  std::string run_out;
  auto* run = app.add_subcommand("run", "find the longest d-near-palindrome");
  add_input_flags(run, run_in);
  add_engine_flags(run, run_eng);
  run->add_option("--output,-o", run_out, "write JSON lines here instead of stdout");

  InputOptions ver_in;
  std::string ver_answers, ver_out;
  auto* verify = app.add_subcommand("verify", "check answer documents against the input");
  add_input_flags(verify, ver_in);
  verify->add_option("--answer,-a", ver_answers, "JSON lines from 'run'")->required();
  verify->add_option("--output,-o", ver_out, "report destination");

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "generate test strings");
  gen->add_option("--kind", gen_opt.kind, "random, planted, mult-hard or add-hard")
      ->check(CLI::IsMember({"random", "planted", "mult-hard", "add-hard"}))
      ->capture_default_str();
  gen->add_option("--length,--n", gen_opt.n, "length (n' for add-hard)")->capture_default_str();
  gen->add_option("--d", gen_opt.d, "mismatch parameter of hard instances")->capture_default_str();
  gen->add_option("--E", gen_opt.E, "additive error of add-hard instances")->capture_default_str();
  gen->add_option("--target-ham", gen_opt.target, "HAM(x, y) of hard instances: d or d+1 (default d)");
  gen->add_option("--sigma", gen_opt.sigma, "alphabet size for random strings (1..4)")->capture_default_str();
  gen->add_option("--pairs", gen_opt.pairs, "mismatched pairs in the planted near-palindrome")->capture_default_str();
  gen->add_option("--seed", gen_opt.seed, "RNG seed (default: $NEARPAL_SEED, else 1)");
  gen->add_option("--format", gen_opt.format, "raw or fasta")->check(CLI::IsMember({"raw", "fasta"}));
  gen->add_option("--output,-o", gen_opt.output, "destination file");

  InputOptions bench_in;
  EngineOptions bench_eng;
  BenchOptions bench_opt;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "time runs and report space counters");
  add_input_flags(bench, bench_in);
  add_engine_flags(bench, bench_eng);
  bench->add_option("--corpus", bench_opt.corpus, "run every file in this directory")->check(CLI::ExistingDirectory);
  bench->add_option("--sizes", bench_opt.sizes, "random string lengths when no input is given")->delimiter(',');
  bench->add_option("--sigma", bench_opt.sigma, "alphabet size of random strings")->check(CLI::Range(1, 4));
  bench->add_option("--output,-o", bench_out, "write JSON lines here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_in, run_eng, run_out);
    if (*verify) return cmd_verify(ver_in, ver_answers, ver_out);
    if (*gen) return cmd_gen(gen_opt);
    if (*bench) return cmd_bench(bench_in, bench_eng, bench_opt, bench_out);
  } catch (const ConfigError& e) {
    std::cerr << "nearpal: configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const InputError& e) {
    std::cerr << "nearpal: input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "nearpal: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
