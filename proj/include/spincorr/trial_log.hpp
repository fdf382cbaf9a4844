#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include "spincorr/kernels.hpp"

namespace spincorr {

// Binary trial log, version 1.
//
//   header: magic "SPNC" | u32 version | u64 n | u64 seed   (24 bytes, LE)
//   record: i8 lambda | f64 s.x | f64 s.y | f64 s.z         (25 bytes, LE)
//
// Scoring from a log must reproduce a direct simulation bit for bit, so
// readers hand back the stored doubles untouched.

inline constexpr char kTrialLogMagic[4] = {'S', 'P', 'N', 'C'};
inline constexpr std::uint32_t kTrialLogVersion = 1;
inline constexpr std::size_t kTrialLogHeaderBytes = 24;
inline constexpr std::size_t kTrialLogRecordBytes = 25;

struct TrialLogHeader {
  std::uint32_t version = kTrialLogVersion;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

class TrialLogError : public std::runtime_error {
 public:
  TrialLogError(const std::string& message, std::uint64_t byte_offset)
      : std::runtime_error(message + " (byte offset " +
                           std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::uint64_t byte_offset() const { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

class TrialLogWriter {
 public:
  TrialLogWriter(const std::string& path, std::uint64_t n, std::uint64_t seed);
  ~TrialLogWriter();

  void append(const kernels::TrialBlock& block, std::size_t count);
  // Flushes and verifies the promised record count was written.
  void finish();

 private:
  std::ofstream out_;
  std::string path_;
  std::uint64_t expected_ = 0;
  std::uint64_t written_ = 0;
  bool finished_ = false;
};

class TrialLogReader {
 public:
  explicit TrialLogReader(const std::string& path);

  const TrialLogHeader& header() const { return header_; }

  // Reads up to max_records into the block; returns the count (0 at end).
  // Validates lambda in {-1,+1} and |s| unit to 1e-9 per record.
  std::size_t read_block(kernels::TrialBlock& block, std::size_t max_records);

  std::uint64_t records_read() const { return records_read_; }

 private:
  std::ifstream in_;
  std::string path_;
  TrialLogHeader header_;
  std::uint64_t records_read_ = 0;
};

}  // namespace spincorr
