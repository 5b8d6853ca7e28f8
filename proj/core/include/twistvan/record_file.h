#ifndef TWISTVAN_RECORD_FILE_H_
#define TWISTVAN_RECORD_FILE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "twistvan/central_values.h"

namespace twistvan {

// Binary record file (little-endian):
//   header: 8-byte magic "TWVREC01", u64 curve fingerprint, i64 X, f64 epsilon
//   record: i64 d, f64 value, f64 err, u8 flags (bit 0 = vanished)
struct RecordFileHeader {
  uint64_t curve_fingerprint = 0;
  int64_t bound = 0;
  double epsilon = 0.0;
};

struct RecordFile {
  RecordFileHeader header;
  std::vector<TwistRecord> records;
};

void WriteRecordFile(const std::string& path, const RecordFile& file);
RecordFile ReadRecordFile(const std::string& path);

// "d,value,err,vanished" with round-trip precision.
std::string RecordsCsv(const std::vector<TwistRecord>& records);

}  // namespace twistvan

#endif  // TWISTVAN_RECORD_FILE_H_
