#include "spincorr/trial_log.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <vector>

namespace spincorr {
namespace {

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& buf, double d) {
  put_u64(buf, std::bit_cast<std::uint64_t>(d));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64(const unsigned char* p) {
  return std::bit_cast<double>(get_u64(p));
}

}  // namespace

TrialLogWriter::TrialLogWriter(const std::string& path, std::uint64_t n,
                               std::uint64_t seed)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), expected_(n) {
  if (!out_) {
    throw std::runtime_error("trial log: cannot open '" + path + "' for writing");
  }
  std::string header;
  header.reserve(kTrialLogHeaderBytes);
  header.append(kTrialLogMagic, 4);
  put_u32(header, kTrialLogVersion);
  put_u64(header, n);
  put_u64(header, seed);
  out_.write(header.data(), static_cast<std::streamsize>(header.size()));
}

TrialLogWriter::~TrialLogWriter() = default;

void TrialLogWriter::append(const kernels::TrialBlock& block, std::size_t count) {
  std::string buf;
  buf.reserve(count * kTrialLogRecordBytes);
  for (std::size_t i = 0; i < count; ++i) {
    buf.push_back(static_cast<char>(block.lambda[i]));
    put_f64(buf, block.sx[i]);
    put_f64(buf, block.sy[i]);
    put_f64(buf, block.sz[i]);
  }
  out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  written_ += count;
  if (!out_) {
    throw std::runtime_error("trial log: short write to '" + path_ + "'");
  }
}

void TrialLogWriter::finish() {
  if (finished_) return;
  if (written_ != expected_) {
    throw std::logic_error("trial log: wrote " + std::to_string(written_) +
                           " records, header promised " + std::to_string(expected_));
  }
  out_.flush();
  if (!out_) {
    throw std::runtime_error("trial log: flush failed for '" + path_ + "'");
  }
  finished_ = true;
}

TrialLogReader::TrialLogReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) {
    throw std::runtime_error("trial log: cannot open '" + path + "' for reading");
  }

  unsigned char header[kTrialLogHeaderBytes];
  in_.read(reinterpret_cast<char*>(header), kTrialLogHeaderBytes);
  if (in_.gcount() != static_cast<std::streamsize>(kTrialLogHeaderBytes)) {
    throw TrialLogError("trial log: truncated header in '" + path + "'",
                        static_cast<std::uint64_t>(in_.gcount()));
  }
  if (std::memcmp(header, kTrialLogMagic, 4) != 0) {
    throw TrialLogError("trial log: bad magic in '" + path + "'", 0);
  }
  header_.version = get_u32(header + 4);
  if (header_.version != kTrialLogVersion) {
    throw TrialLogError("trial log: unsupported version " +
                            std::to_string(header_.version) + " in '" + path + "'",
                        4);
  }
  header_.n = get_u64(header + 8);
  header_.seed = get_u64(header + 16);

  // Validate the payload length up front so truncation reports expected vs
  // found record counts.
  const auto data_start = in_.tellg();
  in_.seekg(0, std::ios::end);
  const std::uint64_t payload =
      static_cast<std::uint64_t>(in_.tellg()) - static_cast<std::uint64_t>(data_start);
  in_.seekg(data_start);
  const std::uint64_t expected_bytes = header_.n * kTrialLogRecordBytes;
  if (payload != expected_bytes) {
    throw TrialLogError(
        "trial log: expected " + std::to_string(header_.n) + " records (" +
            std::to_string(expected_bytes) + " payload bytes), found " +
            std::to_string(payload / kTrialLogRecordBytes) + " complete records (" +
            std::to_string(payload) + " bytes) in '" + path + "'",
        kTrialLogHeaderBytes + payload);
  }
}

std::size_t TrialLogReader::read_block(kernels::TrialBlock& block,
                                       std::size_t max_records) {
  const std::uint64_t remaining = header_.n - records_read_;
  const std::size_t want = static_cast<std::size_t>(
      std::min<std::uint64_t>(remaining, max_records));
  if (want == 0) return 0;

  std::vector<unsigned char> buf(want * kTrialLogRecordBytes);
  in_.read(reinterpret_cast<char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (in_.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw TrialLogError("trial log: truncated read in '" + path_ + "'",
                        kTrialLogHeaderBytes + records_read_ * kTrialLogRecordBytes +
                            static_cast<std::uint64_t>(in_.gcount()));
  }

  block.resize(want);
  for (std::size_t i = 0; i < want; ++i) {
    const unsigned char* rec = buf.data() + i * kTrialLogRecordBytes;
    const std::uint64_t offset =
        kTrialLogHeaderBytes + (records_read_ + i) * kTrialLogRecordBytes;
    const std::int8_t lambda = static_cast<std::int8_t>(rec[0]);
    if (lambda != 1 && lambda != -1) {
      throw TrialLogError("trial log: record " + std::to_string(records_read_ + i) +
                              " has invalid orientation " + std::to_string(lambda),
                          offset);
    }
    const double sx = get_f64(rec + 1);
    const double sy = get_f64(rec + 9);
    const double sz = get_f64(rec + 17);
    const double norm = std::sqrt((sx * sx + sy * sy) + sz * sz);
    if (!(std::abs(norm - 1.0) <= 1e-9)) {
      throw TrialLogError("trial log: record " + std::to_string(records_read_ + i) +
                              " direction is not unit length",
                          offset);
    }
    block.lambda[i] = lambda;
    block.sx[i] = sx;
    block.sy[i] = sy;
    block.sz[i] = sz;
  }
  records_read_ += want;
  return want;
}

}  // namespace spincorr
