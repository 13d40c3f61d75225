#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "deltadiv/records.hpp"
#include "json.hpp"
#include "../support/oracles.hpp"

using namespace deltadiv;

namespace {

ScatterRecord sample_record(std::uint64_t id) {
  ScatterRecord r;
  r.sample_id = id;
  r.m = 3;
  r.dom_diff = 0.1;
  r.d_kl = id % 2 ? INFINITY : 0.123456789012345678;
  r.d_kl_sym = r.d_kl;
  r.d_js = 1.0 / 3.0;
  r.d_tv = 0.4;
  r.d_delta = 0.4;
  r.delta_star = 0.4;
  r.delta_max = 0.45;
  r.case_tag = DeltaCase::DisagreeBothNonnegative;
  r.clutter_tv = 0.0;
  r.clutter_delta = 0.0;
  r.a_term = 0.4;
  r.b_term = 0.4;
  r.log_base_kl = std::exp(1.0);
  r.kl_clipped = id % 2;
  return r;
}

}  // namespace

TEST(Records, ColumnNames) {
  const std::vector<std::string_view> expected{
      "sample_id", "m",          "dom_diff",      "d_kl",   "d_kl_sym",   "d_js",
      "d_tv",      "d_delta",    "delta_star",    "delta_max", "case_tag", "clutter_tv",
      "clutter_delta", "a_term", "b_term",        "log_base_kl", "kl_clipped"};
  EXPECT_EQ(scatter_columns(), expected);
}

TEST(Records, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(INFINITY), "inf");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(format_number(NAN), "");
  for (double v : {1.0 / 3.0, 2.0 / 7.0, 1e-300, 0.1 + 0.2}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Records, CsvQuote) {
  EXPECT_EQ(csv_quote("plain"), "plain");
  EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_quote("two\nlines"), "\"two\nlines\"");
}

TEST(Records, FieldLookup) {
  const ScatterRecord r = sample_record(0);
  EXPECT_EQ(record_field(r, "d_delta"), 0.4);
  EXPECT_EQ(record_field(r, "delta_max"), 0.45);
  EXPECT_ERROR_CODE(record_field(r, "case_tag"), UnknownMeasure);
  EXPECT_ERROR_CODE(record_field(r, "d_hellinger"), UnknownMeasure);
}

TEST(Records, CsvRoundTripAndChecksum) {
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::Csv);
  for (std::uint64_t i = 0; i < 5; ++i) w.write(sample_record(i));
  w.finish();
  EXPECT_EQ(w.rows(), 5u);
  const std::string text = out.str();
  EXPECT_EQ(w.checksum(), sha256_hex(text));
  EXPECT_EQ(text.substr(0, text.find("\r\n")),
            "sample_id,m,dom_diff,d_kl,d_kl_sym,d_js,d_tv,d_delta,delta_star,delta_max,case_tag,"
            "clutter_tv,clutter_delta,a_term,b_term,log_base_kl,kl_clipped");
  EXPECT_NE(text.find(",inf,inf,"), std::string::npos);

  std::istringstream in(text);
  const auto back = read_records_csv(in);
  ASSERT_EQ(back.size(), 5u);
  for (std::uint64_t i = 0; i < 5; ++i) {
    const ScatterRecord r = sample_record(i);
    EXPECT_EQ(back[i].sample_id, r.sample_id);
    EXPECT_EQ(back[i].m, r.m);
    EXPECT_EQ(back[i].d_kl, r.d_kl);
    EXPECT_EQ(back[i].d_js, r.d_js);
    EXPECT_EQ(back[i].log_base_kl, r.log_base_kl);
    EXPECT_EQ(back[i].case_tag, r.case_tag);
    EXPECT_EQ(back[i].kl_clipped, r.kl_clipped);
  }
}

TEST(Records, UnselectedMeasuresAreEmpty) {
  ScatterRecord r = sample_record(0);
  r.d_kl = NAN;
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::Csv);
  w.write(r);
  EXPECT_NE(out.str().find(",0.10000000000000001,,"), std::string::npos);
  std::istringstream in(out.str());
  EXPECT_TRUE(std::isnan(read_records_csv(in).at(0).d_kl));
}

TEST(Records, HeaderOnlyWhenEmpty) {
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::Csv);
  w.finish();
  EXPECT_EQ(w.rows(), 0u);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Records, JsonLines) {
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::Jsonl);
  w.write(sample_record(0));
  w.write(sample_record(1));
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("sample_id").get<int>(), n);
    EXPECT_EQ(j.at("case_tag").get<std::string>(), "DisagreeBothNonnegative");
    if (n == 1) {
      EXPECT_EQ(j.at("d_kl").get<std::string>(), "inf");
      EXPECT_TRUE(j.at("kl_clipped").get<bool>());
    } else {
      EXPECT_DOUBLE_EQ(j.at("d_kl").get<double>(), 0.123456789012345678);
    }
    ++n;
  }
  EXPECT_EQ(n, 2);
}

TEST(Records, MalformedInput) {
  std::istringstream bad_header("a,b,c\r\n1,2,3\r\n");
  EXPECT_ERROR_CODE(read_records_csv(bad_header), ParseError);

  std::ostringstream out;
  RecordWriter w(out, RecordFormat::Csv);
  w.write(sample_record(0));
  std::string text = out.str();
  text.replace(text.find("0.40000000000000002"), 3, "x.4");
  std::istringstream in(text);
  EXPECT_ERROR_CODE(read_records_csv(in), ParseError);
}

TEST(Records, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Records, WriteFailure) {
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  RecordWriter w(out, RecordFormat::Csv);
  EXPECT_ERROR_CODE(w.write(sample_record(0)), WriteFailure);
}
