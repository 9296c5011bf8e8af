// Copyright 2026 The hxai Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "hxai/error.hpp"
#include "hxai/tabular.hpp"

namespace hxai {
namespace {

// Transcribed by hand from the published feature table.
const std::vector<std::pair<std::string, FeatureKind>> kTable = {
    {"age", FeatureKind::kInteger},           {"sex", FeatureKind::kBoolean},
    {"on_thyroxine", FeatureKind::kBoolean},  {"on_antithyroid_meds", FeatureKind::kBoolean},
    {"sick", FeatureKind::kBoolean},          {"pregnant", FeatureKind::kBoolean},
    {"thyroid_surgery", FeatureKind::kBoolean}, {"I131_treatment", FeatureKind::kBoolean},
    {"query_hypothyroid", FeatureKind::kBoolean}, {"query_hyperthyroid", FeatureKind::kBoolean},
    {"lithium", FeatureKind::kBoolean},       {"goitre", FeatureKind::kBoolean},
    {"tumor", FeatureKind::kBoolean},         {"hypopituitary", FeatureKind::kReal},
    {"psych", FeatureKind::kBoolean},         {"TSH", FeatureKind::kReal},
    {"T3", FeatureKind::kReal},               {"TT4", FeatureKind::kReal},
    {"T4U", FeatureKind::kReal},              {"FTI", FeatureKind::kReal},
};

std::string document_without(const std::string& name) {
  std::string out;
  for (const auto& [n, k] : kTable) {
    if (n == name) continue;
    out += n + " | " + std::string(to_string(k)) + "\n";
  }
  return out;
}

std::string error_message(const std::string& doc) {
  try {
    load_schema(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
    return e.what();
  }
  return "<no error>";
}

TEST(Schema, DefaultMatchesFeatureTable) {
  const auto& s = default_schema();
  ASSERT_EQ(s.size(), kTable.size());
  for (std::size_t i = 0; i < kTable.size(); ++i) {
    EXPECT_EQ(s.feature(i).name, kTable[i].first);
    EXPECT_EQ(s.feature(i).kind, kTable[i].second) << kTable[i].first;
    EXPECT_TRUE(s.feature(i).mutable_);
  }
  ASSERT_EQ(s.classes().size(), 3u);
  EXPECT_EQ(s.classes()[0], "Negative");
  EXPECT_EQ(s.classes()[1], "Hyperthyroid");
  EXPECT_EQ(s.classes()[2], "Hypothyroid");
}

TEST(Schema, DefaultDisplayOrderPutsAgeSexTshFirst) {
  const auto& s = default_schema();
  const auto& order = s.display_order();
  ASSERT_EQ(order.size(), 20u);
  EXPECT_EQ(s.feature(order[0]).name, "age");
  EXPECT_EQ(s.feature(order[1]).name, "sex");
  EXPECT_EQ(s.feature(order[2]).name, "TSH");
  // The rest keep table order.
  std::vector<std::string> rest;
  for (std::size_t i = 3; i < order.size(); ++i) rest.push_back(s.feature(order[i]).name);
  std::vector<std::string> expected;
  for (const auto& [n, k] : kTable) {
    if (n != "age" && n != "sex" && n != "TSH") expected.push_back(n);
  }
  EXPECT_EQ(rest, expected);
}

TEST(Schema, MissingFeatureIsNamed) {
  EXPECT_EQ(error_message(document_without("TSH")), "missing feature: TSH");
}

TEST(Schema, DuplicateFeatureIsNamed) {
  EXPECT_EQ(error_message(document_without("") + "age | integer\n"), "duplicate feature: age");
}

TEST(Schema, UnknownKindAndFeatureAreErrors) {
  auto doc = document_without("hypopituitary") + "hypopituitary | float\n";
  EXPECT_NE(error_message(doc).find("float"), std::string::npos);
  EXPECT_NE(error_message(document_without("") + "weight | real\n").find("weight"),
            std::string::npos);
}

TEST(Schema, FeatureKindParsing) {
  EXPECT_EQ(parse_feature_kind("Boolean"), FeatureKind::kBoolean);
  EXPECT_EQ(parse_feature_kind(" integer "), FeatureKind::kInteger);
  EXPECT_EQ(parse_feature_kind("REAL"), FeatureKind::kReal);
  EXPECT_THROW(parse_feature_kind("string"), Error);
  for (auto k : {FeatureKind::kBoolean, FeatureKind::kInteger, FeatureKind::kReal}) {
    EXPECT_EQ(parse_feature_kind(to_string(k)), k);
  }
}

TEST(Schema, ExplicitPrioritiesAndMutability) {
  std::string doc = "classes: negative, HYPERTHYROID, Hypothyroid\n";
  int p = 19;
  for (const auto& [n, k] : kTable) {
    doc += n + " | " + std::string(to_string(k)) + " | d | " + std::to_string(p--) + " | " +
           (n == "sex" ? "false" : "true") + "\n";
  }
  const auto s = load_schema(doc);
  EXPECT_EQ(s.feature(s.display_order()[0]).name, "FTI");
  EXPECT_FALSE(s.feature(s.index_of("sex")).mutable_);
  EXPECT_EQ(s.classes()[1], "Hyperthyroid");
}

TEST(Schema, PartialOrDuplicatePrioritiesRejected) {
  std::string partial = document_without("FTI") + "FTI | real | x | 7\n";
  EXPECT_NE(error_message(partial).find("display_priority"), std::string::npos);
  std::string dup;
  for (const auto& [n, k] : kTable) dup += n + " | " + std::string(to_string(k)) + " | | 1\n";
  EXPECT_NE(error_message(dup).find("display_priority"), std::string::npos);
}

TEST(Schema, ClassListMustBeFixed) {
  EXPECT_NE(error_message("classes: A, B, C\n" + document_without("")).find("classes"),
            std::string::npos);
}

TEST(Schema, ClassLabels) {
  EXPECT_EQ(ClassLabel(2).index(), 2);
  try {
    ClassLabel bad(3);
    FAIL() << "accepted class 3";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidClass);
  }
  EXPECT_THROW(ClassLabel(-1), Error);
  EXPECT_EQ(parse_class_label("hypothyroid").index(), 2);
  EXPECT_EQ(parse_class_label("Negative").index(), 0);
  EXPECT_EQ(parse_class_label("1").index(), 1);
  EXPECT_THROW(parse_class_label("7"), Error);
  EXPECT_THROW(parse_class_label("euthyroid"), Error);
}

TEST(Schema, FingerprintTracksModelVisibleShape) {
  const auto& a = default_schema();
  const auto b = load_schema(default_schema_document());
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  // Reordering columns changes what a model sees.
  std::string swapped = "sex | boolean\nage | integer\n";
  for (const auto& [n, k] : kTable) {
    if (n != "age" && n != "sex") swapped += n + " | " + std::string(to_string(k)) + "\n";
  }
  EXPECT_NE(load_schema(swapped).fingerprint(), a.fingerprint());
  // Display settings do not.
  std::string frozen;
  for (const auto& [n, k] : kTable) {
    frozen += n + " | " + std::string(to_string(k)) + " | | | " + (n == "age" ? "no" : "yes") + "\n";
  }
  EXPECT_EQ(load_schema(frozen).fingerprint(), a.fingerprint());
}

TEST(Schema, BundledSchemaFileEqualsBuiltIn) {
  const auto file = load_schema_file(std::string(HXAI_SOURCE_DIR) + "/data/thyroid_schema.txt");
  const auto& builtin = default_schema();
  ASSERT_EQ(file.size(), builtin.size());
  for (std::size_t i = 0; i < file.size(); ++i) {
    EXPECT_EQ(file.feature(i).name, builtin.feature(i).name);
    EXPECT_EQ(file.feature(i).kind, builtin.feature(i).kind);
    EXPECT_EQ(file.feature(i).display_priority, builtin.feature(i).display_priority);
  }
  EXPECT_EQ(file.fingerprint(), builtin.fingerprint());
}

TEST(Schema, RecordValidation) {
  const auto& s = default_schema();
  Record r{"x", std::vector<double>(20, 0.0)};
  EXPECT_NO_THROW(validate_record(s, r));
  r.values[s.index_of("sex")] = 2;
  EXPECT_THROW(validate_record(s, r), Error);
  r.values[s.index_of("sex")] = 1;
  r.values[s.index_of("age")] = 40.5;
  EXPECT_THROW(validate_record(s, r), Error);
  r.values[s.index_of("age")] = 40;
  r.values[s.index_of("TSH")] = -0.1;
  EXPECT_THROW(validate_record(s, r), Error);
  r.values[s.index_of("TSH")] = 0.1;
  r.values.pop_back();
  EXPECT_THROW(validate_record(s, r), Error);
}

}  // namespace
}  // namespace hxai
