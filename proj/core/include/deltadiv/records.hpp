#pragma once

// Tabular experiment output: the per-pair measure panel, its CSV and
// JSON-lines encodings, and a digesting writer for run checksums.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "deltadiv/delta.hpp"

namespace deltadiv {

/// One sampled pair with every measure evaluated. Measures that were not
/// selected for a run hold NaN and serialize as empty CSV fields / null.
struct ScatterRecord {
  std::uint64_t sample_id = 0;
  std::uint32_t m = 0;
  double dom_diff = 0.0;
  double d_kl = 0.0;
  double d_kl_sym = 0.0;
  double d_js = 0.0;
  double d_tv = 0.0;
  double d_delta = 0.0;
  double delta_star = 0.0;
  double delta_max = 0.0;
  DeltaCase case_tag = DeltaCase::LabelAgreement;
  double clutter_tv = 0.0;
  double clutter_delta = 0.0;
  double a_term = 0.0;
  double b_term = 0.0;
  double log_base_kl = 0.0;
  /// d_kl above the plot ceiling of the run.
  bool kl_clipped = false;
};

/// Column names in output order.
const std::vector<std::string_view>& scatter_columns();

/// Numeric field by column name (case_tag and kl_clipped excluded).
/// Throws Error(UnknownMeasure).
double record_field(const ScatterRecord& r, std::string_view name);

/// 17 significant digits; +inf as "inf", -inf as "-inf", NaN as "".
std::string format_number(double v);

/// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string csv_quote(std::string_view field);

enum class RecordFormat { Csv, Jsonl };

/// Streams records to an ostream while hashing every emitted byte.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, RecordFormat format);
  ~RecordWriter();
  RecordWriter(const RecordWriter&) = delete;
  RecordWriter& operator=(const RecordWriter&) = delete;

  /// Emits the header (CSV only). Called implicitly by the first write.
  void begin();
  /// Throws Error(WriteFailure) when the stream goes bad.
  void write(const ScatterRecord& r);
  void finish();

  std::uint64_t rows() const noexcept { return rows_; }
  /// SHA-256 of everything written so far, lowercase hex.
  std::string checksum() const;

  struct Digest;

 private:
  void emit(std::string_view text);

  std::ostream& out_;
  RecordFormat format_;
  bool started_ = false;
  std::uint64_t rows_ = 0;
  std::unique_ptr<Digest> digest_;
};

/// Parses a CSV produced by RecordWriter. Throws Error(ParseError) with the
/// line number on malformed input.
std::vector<ScatterRecord> read_records_csv(std::istream& in);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace deltadiv
