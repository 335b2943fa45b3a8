#include "sact/corpus_io.hpp"

#include <gtest/gtest.h>

#include <string>

#include "json.hpp"
#include "sact/error.hpp"
#include "sact/hash.hpp"
#include "sact/random.hpp"
#include "synthetic.hpp"

namespace sact {
namespace {

std::string error_of(std::string_view content, const std::vector<std::string>& expected = {}) {
  try {
    parse_corpus(content, expected);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(CorpusTest, ParsesRecords) {
  const LabeledCorpus c = parse_corpus(
      "#labels=Ques,Req\n"
      "id=1\tlabel=Ques\ttext=آیا می آیی؟\n"
      "id=2\tlabel=Req\tdomain=news\textra.depth=3.5\ttext=لطفا\\tبیا\\nفردا\n");
  ASSERT_EQ(c.records.size(), 2u);
  EXPECT_EQ(c.labels, (std::vector<std::string>{"Ques", "Req"}));
  EXPECT_EQ(c.records[0].text, "آیا می آیی؟");
  EXPECT_FALSE(c.records[0].domain.has_value());
  EXPECT_EQ(c.records[1].domain, "news");
  EXPECT_EQ(c.records[1].text, "لطفا\tبیا\nفردا");
  EXPECT_DOUBLE_EQ(c.records[1].extra.at("depth"), 3.5);
  EXPECT_EQ(c.histogram(), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(c.label_index("Req"), 1);
  EXPECT_EQ(c.label_index("Dir"), -1);
}

TEST(CorpusTest, UnknownLabelNamesLine) {
  const std::string msg = error_of("#labels=Ques,Req\nid=1\tlabel=Ques\ttext=a\nid=2\tlabel=Foo\ttext=b\n");
  EXPECT_NE(msg.find("unknown label Foo at line 3"), std::string::npos) << msg;
}

TEST(CorpusTest, ReportsMalformedInput) {
  EXPECT_NE(error_of("").find("missing #labels header"), std::string::npos);
  EXPECT_NE(error_of("id=1\tlabel=A\ttext=x\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("#labels=A\n\nid=1\tlabel=A\ttext=x\n").find("empty record at line 2"),
            std::string::npos);
  EXPECT_NE(error_of("#labels=A\nid=1\tlabel=A\ttext=x\nid=1\tlabel=A\ttext=y\n").find("duplicate id"),
            std::string::npos);
  EXPECT_NE(error_of("#labels=A\nid=1\tlabel=A\ttext=  \n").find("empty text at line 2"),
            std::string::npos);
  EXPECT_NE(error_of("#labels=A\nid=1\tlabel=A\n").find("missing text"), std::string::npos);
  EXPECT_NE(error_of("#labels=A\nid=1\tlabel=A\ttext=x\tbogus=1\n").find("unknown field"),
            std::string::npos);
  EXPECT_NE(error_of("#labels=A\nid=1\tlabel=A\ttext=x\\q\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("#labels=A\nid=1\tlabel=A\textra.d=abc\ttext=x\n").find("bad number"),
            std::string::npos);
  EXPECT_NE(error_of("#labels=A\nid=1\tlabel=A\tveracity=XX\ttext=x\n").find("FR or TR"),
            std::string::npos);
  EXPECT_NE(error_of("#labels=A,A\n").find("twice"), std::string::npos);
  EXPECT_NE(error_of("#labels=Rumor,Other\n", {"Rumor", "NonRumor"}).find("unknown label Other"),
            std::string::npos);
}

TEST(CorpusTest, AcceptsCrlfAndMissingFinalNewline) {
  const LabeledCorpus c = parse_corpus("#labels=A\r\nid=1\tlabel=A\ttext=x\r\nid=2\tlabel=A\ttext=y");
  ASSERT_EQ(c.records.size(), 2u);
  EXPECT_EQ(c.records[0].text, "x");
}

TEST(EscapeTest, RoundTripsOnFuzzStrings) {
  Rng rng(1);
  const std::string alphabet = "ab\\\t\n\r=x ";
  for (int trial = 0; trial < 1000; ++trial) {
    std::string s;
    const std::size_t n = rng.uniform(20);
    for (std::size_t i = 0; i < n; ++i) s += alphabet[rng.uniform(alphabet.size())];
    const std::string e = escape_field(s);
    EXPECT_EQ(e.find('\t'), std::string::npos);
    EXPECT_EQ(e.find('\n'), std::string::npos);
    EXPECT_EQ(unescape_field(e), s);
  }
}

TEST(CorpusTest, FormatParseRoundTrip) {
  const testing::SyntheticWorld world(3);
  LabeledCorpus c = world.veracity_corpus(5, 7);
  c.records[0].domain = "sport\tnews";
  c.records[1].extra["dependency_depth"] = 4.25;
  const std::string text = format_corpus(c);
  const LabeledCorpus back = parse_corpus(text);
  EXPECT_EQ(format_corpus(back), text);
  ASSERT_EQ(back.records.size(), c.records.size());
  EXPECT_EQ(back.records[0].domain, c.records[0].domain);
  EXPECT_EQ(back.records[2].veracity, c.records[2].veracity);
  EXPECT_EQ(back.records[1].extra, c.records[1].extra);
}

TEST(CorpusTest, LoadPrefixesPath) {
  const auto dir = testing::make_temp_dir("corpus");
  const auto path = dir / "bad.tsv";
  write_file_atomic(path, "#labels=A\nid=1\tlabel=B\ttext=x\n");
  try {
    load_corpus(path);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.tsv"), std::string::npos);
  }
  EXPECT_THROW(load_corpus(dir / "missing.tsv"), ResourceError);
}

ModelArchive small_archive(ModelKind kind) {
  Dataset d;
  d.schema = std::make_shared<const FeatureSchema>(std::vector<FeatureSpec>{
      {"a", FeatureKind::kCount}, {"b", FeatureKind::kBinary}, {"c", FeatureKind::kReal}});
  d.labels = {"X", "Y"};
  d.rows = {{1, 0, 0.5}, {2, 1, -0.5}, {0, 1, 0.25}, {3, 0, 0.0}};
  d.targets = {0, 1, 1, 0};
  Hyperparams h;
  h.rf_trees = 3;
  h.svm_epochs = 5;
  return {train(kind, d, h), {{"resources.dictionary", "f1"}, {"resources.ontology", "f2"}}, {}};
}

TEST(ArchiveTest, SchemaVersionComesFirstAndIsChecked) {
  const std::string text = serialize_model(small_archive(ModelKind::kNb));
  EXPECT_EQ(text.rfind("{\n \"schema_version\": 1,", 0), 0u) << text.substr(0, 40);
  auto j = nlohmann::ordered_json::parse(text);
  j["schema_version"] = 2;
  EXPECT_THROW(deserialize_model(j.dump()), DataError);
  EXPECT_THROW(deserialize_model("{"), DataError);
  EXPECT_THROW(deserialize_model("[]"), DataError);
}

TEST(ArchiveTest, RejectsCorruptPayloads) {
  const std::string text = serialize_model(small_archive(ModelKind::kRf));
  auto j = nlohmann::ordered_json::parse(text);
  auto bad = j;
  bad["payload"]["trees"][0]["nodes"][0]["l"] = 0;
  if (bad["payload"]["trees"][0]["nodes"][0].contains("f")) {
    EXPECT_THROW(deserialize_model(bad.dump()), DataError);
  }
  bad = j;
  bad["model_kind"] = "tree";
  EXPECT_THROW(deserialize_model(bad.dump()), DataError);
  bad = j;
  bad["payload"]["trees"] = nlohmann::ordered_json::array();
  EXPECT_THROW(deserialize_model(bad.dump()), DataError);

  auto svm = nlohmann::ordered_json::parse(serialize_model(small_archive(ModelKind::kSvm)));
  svm["payload"]["weights"][0].erase(0);
  EXPECT_THROW(deserialize_model(svm.dump()), DataError);
  auto knn = nlohmann::ordered_json::parse(serialize_model(small_archive(ModelKind::kKnn)));
  knn["payload"]["targets"][0] = 5;
  EXPECT_THROW(deserialize_model(knn.dump()), DataError);
}

TEST(ArchiveTest, SaveLoadRoundTrip) {
  const auto dir = testing::make_temp_dir("archive");
  for (ModelKind kind : {ModelKind::kNb, ModelKind::kKnn, ModelKind::kRf, ModelKind::kSvm}) {
    const ModelArchive a = small_archive(kind);
    save_model(a, dir / "m.json");
    const ModelArchive b = load_model(dir / "m.json");
    EXPECT_EQ(serialize_model(b), serialize_model(a));
    EXPECT_EQ(b.model.kind, kind);
    EXPECT_EQ(b.model.labels, a.model.labels);
  }
}

TEST(ArchiveTest, FingerprintWarnings) {
  const ModelArchive a = small_archive(ModelKind::kNb);
  EXPECT_TRUE(fingerprint_warnings(a, a.resource_fingerprints).empty());
  const auto w = fingerprint_warnings(a, {{"resources.dictionary", "changed"}});
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NE(w[0].find("resources.dictionary"), std::string::npos);
  EXPECT_NE(w[1].find("resources.ontology"), std::string::npos);
}

}  // namespace
}  // namespace sact
