#include <gtest/gtest.h>

#include <json.hpp>
#include <set>

#include "fixtures.hpp"
#include "heliosweep/container.hpp"
#include "heliosweep/dataset.hpp"
#include "heliosweep/error.hpp"

using namespace heliosweep;
using heliosweep::testing::slurp;
using heliosweep::testing::spit;
using heliosweep::testing::TempDir;
using heliosweep::testing::write_suns;

namespace {

template <typename F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no exception";
  return Error(Errc::InvalidArgument, "none");
}

}  // namespace

TEST(Splits, SizesFollowRoundedFractions) {
  EXPECT_EQ(split_sizes(319, {}), (SplitSizes{179, 44, 96}));
  EXPECT_EQ(split_sizes(367, {0.558, 0.139, 0.303}), (SplitSizes{205, 51, 111}));
  EXPECT_EQ(split_sizes(10, {}), (SplitSizes{6, 1, 3}));
  EXPECT_EQ(split_sizes(0, {}), (SplitSizes{0, 0, 0}));
  EXPECT_EQ(split_sizes(20, {0, 0, 1}), (SplitSizes{0, 0, 20}));
}

TEST(Splits, SizesSumToTotal) {
  for (int n = 0; n < 1000; ++n) {
    const SplitSizes s = split_sizes(n, {});
    EXPECT_EQ(s.train + s.val + s.test, n);
    EXPECT_GE(s.test, 0);
  }
}

TEST(Splits, RejectsBadFractions) {
  EXPECT_EQ(error_of([] { split_sizes(10, {-0.1, 0.5, 0.6}); }).code(), Errc::InvalidArgument);
  EXPECT_EQ(error_of([] { split_sizes(10, {0.9, 0.9, 0.0}); }).code(), Errc::InvalidArgument);
  EXPECT_EQ(error_of([] { split_sizes(-1, {}); }).code(), Errc::InvalidArgument);
}

TEST(Splits, AssignmentMatchesSizesAndSeed) {
  const auto a = assign_splits(319, 7, {});
  ASSERT_EQ(a.size(), 319u);
  int counts[3] = {0, 0, 0};
  for (Split s : a) ++counts[static_cast<int>(s)];
  EXPECT_EQ(counts[0], 179);
  EXPECT_EQ(counts[1], 44);
  EXPECT_EQ(counts[2], 96);
  EXPECT_EQ(a, assign_splits(319, 7, {}));
  EXPECT_NE(a, assign_splits(319, 8, {}));
}

TEST(Splits, Names) {
  for (Split s : {Split::Train, Split::Val, Split::Test}) EXPECT_EQ(parse_split(split_name(s)), s);
  EXPECT_EQ(error_of([] { parse_split("holdout"); }).code(), Errc::InvalidArgument);
}

class DatasetTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    clean_ = new TempDir("hs_clean");
    write_suns(clean_->path(), 12, 64);
  }
  static void TearDownTestSuite() {
    delete clean_;
    clean_ = nullptr;
  }
  static TempDir* clean_;
};

TempDir* DatasetTest::clean_ = nullptr;

TEST_F(DatasetTest, LayoutAndDisjointSplits) {
  TempDir out;
  const Manifest m = build_dataset(clean_->path(), out.path(), {.seed = 5});
  ASSERT_EQ(m.entries.size(), 12u);
  std::set<std::string> ids;
  for (const auto& e : m.entries) {
    EXPECT_TRUE(ids.insert(e.id).second);
    for (const auto& rel : {e.clean, e.cloudy, e.mask_residual, e.mask_transmittance, e.recipe}) {
      EXPECT_TRUE(std::filesystem::exists(m.resolve(rel))) << rel;
    }
    EXPECT_EQ(e.checksum, entry_checksum(e, m.root));
    EXPECT_EQ(read_mask(m.resolve(e.mask_residual)).kind(), MaskKind::Residual);
    EXPECT_EQ(read_mask(m.resolve(e.mask_transmittance)).kind(), MaskKind::Transmittance);
  }
  const SplitSizes sizes = split_sizes(12, {});
  EXPECT_EQ(static_cast<int>(m.in_split(Split::Train).size()), sizes.train);
  EXPECT_EQ(static_cast<int>(m.in_split(Split::Val).size()), sizes.val);
  EXPECT_EQ(static_cast<int>(m.in_split(Split::Test).size()), sizes.test);
  EXPECT_TRUE(std::filesystem::exists(out / std::string(kManifestName)));
}

TEST_F(DatasetTest, ManifestByteIdenticalForSeedAndJobs) {
  TempDir a, b, c;
  build_dataset(clean_->path(), a.path(), {.seed = 11, .jobs = 1});
  build_dataset(clean_->path(), b.path(), {.seed = 11, .jobs = 3});
  build_dataset(clean_->path(), c.path(), {.seed = 12});
  const std::string ma = slurp(a / std::string(kManifestName));
  EXPECT_FALSE(ma.empty());
  EXPECT_EQ(ma, slurp(b / std::string(kManifestName)));
  EXPECT_NE(ma, slurp(c / std::string(kManifestName)));
  EXPECT_EQ(slurp(a / "cloudy/sun_003.solc"), slurp(b / "cloudy/sun_003.solc"));
}

TEST_F(DatasetTest, LoadRoundTrip) {
  TempDir out;
  const Manifest built = build_dataset(clean_->path(), out.path(), {.seed = 2});
  const Manifest loaded = load_manifest(out / std::string(kManifestName));
  ASSERT_EQ(loaded.entries.size(), built.entries.size());
  for (std::size_t i = 0; i < built.entries.size(); ++i) {
    EXPECT_EQ(loaded.entries[i].id, built.entries[i].id);
    EXPECT_EQ(loaded.entries[i].split, built.entries[i].split);
    EXPECT_EQ(loaded.entries[i].recipe_seed, built.entries[i].recipe_seed);
    EXPECT_EQ(loaded.entries[i].checksum, built.entries[i].checksum);
  }
}

TEST_F(DatasetTest, DeletedMaskReportsPath) {
  TempDir out;
  const Manifest m = build_dataset(clean_->path(), out.path(), {.seed = 3});
  const auto victim = m.resolve(m.entries[4].mask_residual);
  std::filesystem::remove(victim);
  const Error e = error_of([&] { load_manifest(out / std::string(kManifestName)); });
  EXPECT_EQ(e.code(), Errc::MissingFile);
  EXPECT_NE(std::string(e.what()).find(m.entries[4].mask_residual), std::string::npos) << e.what();
}

TEST_F(DatasetTest, EditedRecipeSeedIsCorrupt) {
  TempDir out;
  build_dataset(clean_->path(), out.path(), {.seed = 4});
  const auto path = out / std::string(kManifestName);
  std::string text = slurp(path);
  const auto nl = text.find('\n');
  auto first = nlohmann::json::parse(text.substr(0, nl));
  first["recipe_seed"] = first["recipe_seed"].get<std::uint64_t>() + 1;
  spit(path, first.dump() + text.substr(nl));
  EXPECT_EQ(error_of([&] { load_manifest(path); }).code(), Errc::CorruptEntry);
}

TEST_F(DatasetTest, TamperedFileIsCorrupt) {
  TempDir out;
  const Manifest m = build_dataset(clean_->path(), out.path(), {.seed = 4});
  const auto p = m.resolve(m.entries[0].cloudy);
  std::string bytes = slurp(p);
  bytes[bytes.size() - 1] ^= 0x01;
  spit(p, bytes);
  EXPECT_EQ(error_of([&] { load_manifest(out / std::string(kManifestName)); }).code(), Errc::CorruptEntry);
}

TEST_F(DatasetTest, MalformedLineIsCorrupt) {
  TempDir out;
  build_dataset(clean_->path(), out.path(), {.seed = 4});
  const auto path = out / std::string(kManifestName);
  spit(path, slurp(path) + "{not json\n");
  EXPECT_EQ(error_of([&] { load_manifest(path); }).code(), Errc::CorruptEntry);
}

TEST_F(DatasetTest, MissingManifest) {
  TempDir out;
  EXPECT_EQ(error_of([&] { load_manifest(out / "manifest.jsonl"); }).code(), Errc::MissingFile);
}

TEST_F(DatasetTest, RepeatsShareTheSourceSplit) {
  TempDir out;
  const Manifest m = build_dataset(clean_->path(), out.path(), {.seed = 6, .repeats = 3});
  ASSERT_EQ(m.entries.size(), 36u);
  for (std::size_t i = 0; i < m.entries.size(); i += 3) {
    const auto& e = m.entries[i];
    EXPECT_EQ(e.id.substr(0, 7), m.entries[i + 2].id.substr(0, 7));
    EXPECT_EQ(e.split, m.entries[i + 1].split);
    EXPECT_EQ(e.split, m.entries[i + 2].split);
    EXPECT_NE(e.recipe_seed, m.entries[i + 1].recipe_seed);
  }
}

TEST(Dataset, EmptyInput) {
  TempDir in, out;
  EXPECT_EQ(error_of([&] { build_dataset(in.path(), out.path(), {}); }).code(), Errc::EmptyInput);
}
