#include "twistvan/record_file.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "twistvan/error.h"

namespace twistvan {
namespace {

constexpr char kMagic[8] = {'T', 'W', 'V', 'R', 'E', 'C', '0', '1'};
constexpr size_t kHeaderBytes = 32;
constexpr size_t kRecordBytes = 25;

void Put(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint64_t Get(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void WriteRecordFile(const std::string& path, const RecordFile& file) {
  std::string buf(kMagic, 8);
  buf.reserve(kHeaderBytes + kRecordBytes * file.records.size());
  Put(buf, file.header.curve_fingerprint);
  Put(buf, static_cast<uint64_t>(file.header.bound));
  Put(buf, std::bit_cast<uint64_t>(file.header.epsilon));
  for (const auto& r : file.records) {
    Put(buf, static_cast<uint64_t>(r.d));
    Put(buf, std::bit_cast<uint64_t>(r.value));
    Put(buf, std::bit_cast<uint64_t>(r.err));
    buf.push_back(static_cast<char>(r.vanished ? 1 : 0));
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kIo, "cannot write record file " + tmp);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) Fail(ErrorKind::kIo, "short write on record file " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot install record file " + path + ": " + ec.message());
}

RecordFile ReadRecordFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open record file " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 8) != 0)
    Fail(ErrorKind::kIo, path + ": not a record file");
  if ((bytes.size() - kHeaderBytes) % kRecordBytes != 0)
    Fail(ErrorKind::kIo, path + ": truncated record");
  RecordFile file;
  file.header.curve_fingerprint = Get(bytes.data() + 8);
  file.header.bound = static_cast<int64_t>(Get(bytes.data() + 16));
  file.header.epsilon = std::bit_cast<double>(Get(bytes.data() + 24));
  size_t count = (bytes.size() - kHeaderBytes) / kRecordBytes;
  file.records.resize(count);
  for (size_t i = 0; i < count; ++i) {
    const unsigned char* p = bytes.data() + kHeaderBytes + i * kRecordBytes;
    TwistRecord& r = file.records[i];
    r.d = static_cast<int64_t>(Get(p));
    r.value = std::bit_cast<double>(Get(p + 8));
    r.err = std::bit_cast<double>(Get(p + 16));
    if (p[24] > 1) Fail(ErrorKind::kIo, path + ": bad flags byte in record " + std::to_string(i));
    r.vanished = p[24] == 1;
  }
  return file;
}

std::string RecordsCsv(const std::vector<TwistRecord>& records) {
  std::ostringstream out;
  out << "d,value,err,vanished\n" << std::setprecision(17);
  for (const auto& r : records)
    out << r.d << ',' << r.value << ',' << r.err << ',' << (r.vanished ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace twistvan
