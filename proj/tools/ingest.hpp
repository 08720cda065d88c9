#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nearpal/engine_twopass.hpp"
#include "nearpal/fingerprint.hpp"

namespace nearpal::cli {

struct FastaRecord {
  std::string header;  // without the leading '>'
  std::uint64_t offset = 0;  // byte offset of the first sequence line
  std::uint64_t length = 0;  // sequence symbols
};

// Indexes a FASTA file in one scan. Lowercase is accepted; with strict set,
// symbols outside ACGTN raise InputError naming the line.
std::vector<FastaRecord> index_fasta(const std::string& path, bool strict);

// Replays one record's sequence, uppercased, skipping line breaks (LF or CRLF).
class FastaRecordSource : public ReplayableSource {
 public:
  FastaRecordSource(std::string path, FastaRecord rec) : path_(std::move(path)), rec_(std::move(rec)) {}
  u64 length() const override { return rec_.length; }
  void replay(const std::function<void(std::uint8_t)>& sink) const override;

 private:
  std::string path_;
  FastaRecord rec_;
};

// "X Y" pairs, one per line, both directions implied; unlisted symbols map to
// themselves. Throws ConfigError when the result is not an involution.
SymbolMap parse_complement_map(const std::string& text);
SymbolMap load_complement_map(const std::string& path);

// Copies stdin to a temporary file removed on destruction.
class TempFile {
 public:
  TempFile();
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }
  // Appends all of stdin; returns the number of bytes written.
  std::uint64_t fill_from_stdin();

 private:
  std::string path_;
};

}  // namespace nearpal::cli
