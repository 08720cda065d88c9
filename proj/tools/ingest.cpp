#include "ingest.hpp"

#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nearpal/errors.hpp"

namespace nearpal::cli {

namespace {

bool allowed_strict(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'A': case 'C': case 'G': case 'T': case 'N': return true;
    default: return false;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::vector<FastaRecord> index_fasta(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<FastaRecord> out;
  std::string line;
  std::uint64_t lineno = 0;
  while (true) {
    std::uint64_t here = static_cast<std::uint64_t>(in.tellg());
    if (!std::getline(in, line)) break;
    ++lineno;
    const bool had_newline = !in.eof();
    strip_cr(line);
    if (!line.empty() && line[0] == '>') {
      FastaRecord rec;
      rec.header = line.substr(1);
      rec.offset = had_newline ? static_cast<std::uint64_t>(in.tellg()) : here + line.size() + 1;
      out.push_back(std::move(rec));
      continue;
    }
    if (line.empty()) continue;
    if (out.empty()) throw InputError(path + ":" + std::to_string(lineno) + ": sequence data before the first header");
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c)))
        throw InputError(path + ":" + std::to_string(lineno) + ": whitespace inside a sequence line");
      if (strict && !allowed_strict(c))
        throw InputError(path + ":" + std::to_string(lineno) + ": symbol '" + std::string(1, c) +
                         "' outside ACGTN (use --alphabet any)");
    }
    out.back().length += line.size();
  }
  return out;
}

void FastaRecordSource::replay(const std::function<void(std::uint8_t)>& sink) const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw InputError("cannot open " + path_);
  in.seekg(static_cast<std::streamoff>(rec_.offset));
  std::string line;
  u64 seen = 0;
  while (seen < rec_.length && std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty() && line[0] == '>') break;
    for (char c : line) sink(static_cast<std::uint8_t>(std::toupper(static_cast<unsigned char>(c))));
    seen += line.size();
  }
  if (seen != rec_.length) throw InputError(path_ + " changed between passes");
}

SymbolMap parse_complement_map(const std::string& text) {
  SymbolMap f = identity_map();
  std::array<bool, 256> set{};
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (a[0] == '#') continue;
    if (!(fields >> b) || a.size() != 1 || b.size() != 1 || (fields >> extra))
      throw ConfigError("complement map line " + std::to_string(lineno) + ": expected two single symbols");
    const auto x = static_cast<std::uint8_t>(a[0]), y = static_cast<std::uint8_t>(b[0]);
    for (auto [u, v] : {std::pair{x, y}, std::pair{y, x}}) {
      if (set[u] && f[u] != v)
        throw ConfigError("complement map line " + std::to_string(lineno) + ": '" + std::string(1, char(u)) +
                          "' is paired twice");
      f[u] = v;
      set[u] = true;
    }
  }
  if (!is_involution(f)) throw ConfigError("complement map is not an involution");
  return f;
}

SymbolMap load_complement_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open complement map " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_complement_map(ss.str());
}

TempFile::TempFile() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "nearpal-XXXXXX").string();
  int fd = ::mkstemp(tmpl.data());
  if (fd < 0) throw InputError("cannot create a temporary file");
  ::close(fd);
  path_ = tmpl;
}

TempFile::~TempFile() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

std::uint64_t TempFile::fill_from_stdin() {
  std::FILE* out = std::fopen(path_.c_str(), "wb");
  if (!out) throw InputError("cannot write " + path_);
  std::vector<char> buf(1 << 16);
  std::uint64_t total = 0;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), stdin)) > 0) {
    if (std::fwrite(buf.data(), 1, got, out) != got) {
      std::fclose(out);
      throw InputError("short write to " + path_);
    }
    total += got;
  }
  std::fclose(out);
  return total;
}

}  // namespace nearpal::cli
