#include "deltadiv/records.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "deltadiv/error.hpp"

namespace deltadiv {

struct RecordWriter::Digest {
  EVP_MD_CTX* ctx = nullptr;
  Digest() : ctx(EVP_MD_CTX_new()) {
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("cannot initialise SHA-256");
    }
  }
  ~Digest() { EVP_MD_CTX_free(ctx); }
  Digest(const Digest&) = delete;
  Digest& operator=(const Digest&) = delete;

  void update(std::string_view bytes) { EVP_DigestUpdate(ctx, bytes.data(), bytes.size()); }

  std::string hex() const {
    EVP_MD_CTX* copy = EVP_MD_CTX_new();
    EVP_MD_CTX_copy_ex(copy, ctx);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(copy, md, &len);
    EVP_MD_CTX_free(copy);
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }
};

namespace {

const std::vector<std::string_view> kColumns{
    "sample_id",  "m",          "dom_diff",   "d_kl",          "d_kl_sym",
    "d_js",       "d_tv",       "d_delta",    "delta_star",    "delta_max",
    "case_tag",   "clutter_tv", "clutter_delta", "a_term",     "b_term",
    "log_base_kl", "kl_clipped"};

std::string json_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return format_number(v);
}

double parse_field(std::string_view text, std::size_t line, std::string_view column) {
  if (text.empty()) return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError,
              fmt::format("line {}: column {}: cannot parse '{}'", line, column, std::string(text)));
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, fmt::format("line {}: unterminated quote", line_no));
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

const std::vector<std::string_view>& scatter_columns() { return kColumns; }

double record_field(const ScatterRecord& r, std::string_view name) {
  if (name == "sample_id") return static_cast<double>(r.sample_id);
  if (name == "m") return r.m;
  if (name == "dom_diff") return r.dom_diff;
  if (name == "d_kl") return r.d_kl;
  if (name == "d_kl_sym") return r.d_kl_sym;
  if (name == "d_js") return r.d_js;
  if (name == "d_tv") return r.d_tv;
  if (name == "d_delta") return r.d_delta;
  if (name == "delta_star") return r.delta_star;
  if (name == "delta_max") return r.delta_max;
  if (name == "clutter_tv") return r.clutter_tv;
  if (name == "clutter_delta") return r.clutter_delta;
  if (name == "a_term") return r.a_term;
  if (name == "b_term") return r.b_term;
  if (name == "log_base_kl") return r.log_base_kl;
  throw Error(ErrorCode::UnknownMeasure, fmt::format("no numeric column '{}'", name));
}

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

RecordWriter::RecordWriter(std::ostream& out, RecordFormat format)
    : out_(out), format_(format), digest_(std::make_unique<Digest>()) {}

RecordWriter::~RecordWriter() = default;

void RecordWriter::emit(std::string_view text) {
  out_.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out_) throw Error(ErrorCode::WriteFailure, "output stream rejected data");
  digest_->update(text);
}

void RecordWriter::begin() {
  if (started_) return;
  started_ = true;
  if (format_ != RecordFormat::Csv) return;
  std::string header;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) header += ',';
    header += csv_quote(kColumns[i]);
  }
  header += "\r\n";
  emit(header);
}

void RecordWriter::write(const ScatterRecord& r) {
  begin();
  std::string line;
  if (format_ == RecordFormat::Csv) {
    line = fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\r\n", r.sample_id,
                       r.m, format_number(r.dom_diff), format_number(r.d_kl),
                       format_number(r.d_kl_sym), format_number(r.d_js), format_number(r.d_tv),
                       format_number(r.d_delta), format_number(r.delta_star),
                       format_number(r.delta_max), csv_quote(to_string(r.case_tag)),
                       format_number(r.clutter_tv), format_number(r.clutter_delta),
                       format_number(r.a_term), format_number(r.b_term),
                       format_number(r.log_base_kl), r.kl_clipped ? 1 : 0);
  } else {
    line = fmt::format(
        "{{\"sample_id\":{},\"m\":{},\"dom_diff\":{},\"d_kl\":{},\"d_kl_sym\":{},\"d_js\":{},"
        "\"d_tv\":{},\"d_delta\":{},\"delta_star\":{},\"delta_max\":{},\"case_tag\":\"{}\","
        "\"clutter_tv\":{},\"clutter_delta\":{},\"a_term\":{},\"b_term\":{},"
        "\"log_base_kl\":{},\"kl_clipped\":{}}}\n",
        r.sample_id, r.m, json_number(r.dom_diff), json_number(r.d_kl), json_number(r.d_kl_sym),
        json_number(r.d_js), json_number(r.d_tv), json_number(r.d_delta),
        json_number(r.delta_star), json_number(r.delta_max), to_string(r.case_tag),
        json_number(r.clutter_tv), json_number(r.clutter_delta), json_number(r.a_term),
        json_number(r.b_term), json_number(r.log_base_kl), r.kl_clipped ? "true" : "false");
  }
  emit(line);
  ++rows_;
}

void RecordWriter::finish() {
  begin();
  out_.flush();
  if (!out_) throw Error(ErrorCode::WriteFailure, "flush failed");
}

std::string RecordWriter::checksum() const { return digest_->hex(); }

std::string sha256_hex(std::string_view bytes) {
  RecordWriter::Digest d;
  d.update(bytes);
  return d.hex();
}

std::vector<ScatterRecord> read_records_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line, line_no);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  for (auto column : kColumns) {
    if (!index.contains(std::string(column))) {
      throw Error(ErrorCode::ParseError, fmt::format("header lacks column '{}'", column));
    }
  }

  std::vector<ScatterRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: expected {} fields, got {}",
                                                     line_no, header.size(), fields.size()));
    }
    auto num = [&](std::string_view column) {
      return parse_field(fields[index.at(std::string(column))], line_no, column);
    };
    ScatterRecord r;
    r.sample_id = static_cast<std::uint64_t>(num("sample_id"));
    r.m = static_cast<std::uint32_t>(num("m"));
    r.dom_diff = num("dom_diff");
    r.d_kl = num("d_kl");
    r.d_kl_sym = num("d_kl_sym");
    r.d_js = num("d_js");
    r.d_tv = num("d_tv");
    r.d_delta = num("d_delta");
    r.delta_star = num("delta_star");
    r.delta_max = num("delta_max");
    r.case_tag = parse_delta_case(fields[index.at("case_tag")]);
    r.clutter_tv = num("clutter_tv");
    r.clutter_delta = num("clutter_delta");
    r.a_term = num("a_term");
    r.b_term = num("b_term");
    r.log_base_kl = num("log_base_kl");
    r.kl_clipped = num("kl_clipped") != 0.0;
    out.push_back(r);
  }
  return out;
}

}  // namespace deltadiv
