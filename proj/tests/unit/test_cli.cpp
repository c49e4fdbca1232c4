#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "heliosweep/container.hpp"
#include "heliosweep/dataset.hpp"
#include "heliosweep/metrics.hpp"
#include "heliosweep/png_io.hpp"

using namespace heliosweep;
using heliosweep::testing::slurp;
using heliosweep::testing::TempDir;
namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(HELIOSWEEP_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, GenerateBuildBenchmark) {
  TempDir t;
  ASSERT_EQ(cli("gensun --out " + q(t / "clean") + " --count 6 --size 64 --seed 3 --neighbours " + q(t / "nb")), 0);
  EXPECT_TRUE(fs::exists(t / "clean/sun_0005.solc"));
  EXPECT_TRUE(fs::exists(t / "nb/sun_0005.solc"));

  ASSERT_EQ(cli("dataset --clean " + q(t / "clean") + " --out " + q(t / "data") + " --seed 4 --splits 0,0,1"), 0);
  const Manifest m = load_manifest(t / "data/manifest.jsonl");
  ASSERT_EQ(m.in_split(Split::Test).size(), 6u);

  ASSERT_EQ(cli("bench --manifest " + q(t / "data/manifest.jsonl") + " --methods gt-residual,cloudy,feng --neighbours " +
                q(t / "nb") + " --out " + q(t / "bench") + " --panels 1"),
            0);
  const std::string csv = slurp(t / "bench/report.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "image_id,method,run,status,psnr_db,ssim,rmse");
  EXPECT_TRUE(fs::exists(t / "bench/summary.json"));
  EXPECT_EQ(std::distance(fs::directory_iterator(t / "bench/panels"), fs::directory_iterator{}), 1);
}

TEST(Cli, ApplyEvalExport) {
  TempDir t;
  ASSERT_EQ(cli("gensun --out " + q(t / "clean") + " --count 2 --size 64"), 0);
  ASSERT_EQ(cli("synth --clean " + q(t / "clean") + " --out " + q(t / "syn") + " --seed 1"), 0);
  ASSERT_TRUE(fs::exists(t / "syn/sun_0000_cloudy.solc"));
  fs::create_directories(t / "pred");
  ASSERT_EQ(cli("apply --in " + q(t / "syn/sun_0000_cloudy.solc") + " --mask " + q(t / "syn/sun_0000_residual.solc") +
                " --out " + q(t / "pred/sun_0000.solc")),
            0);
  EXPECT_EQ(rmse(read_image(t / "pred/sun_0000.solc"), read_image(t / "clean/sun_0000.solc")), 0.0);

  ASSERT_EQ(cli("eval --pred " + q(t / "pred") + " --target " + q(t / "clean") + " --report " + q(t / "eval.csv")), 0);
  const std::string csv = slurp(t / "eval.csv");
  EXPECT_NE(csv.find("sun_0000"), std::string::npos);
  EXPECT_NE(csv.find("inf"), std::string::npos);

  ASSERT_EQ(cli("export --in " + q(t / "pred/sun_0000.solc") + " --out " + q(t / "out.png") + " --bits 16"), 0);
  const SolarImage png = import_png16(t / "out.png");
  EXPECT_EQ(png.width(), 64);
}

TEST(Cli, CleanAndPreprocess) {
  TempDir t;
  ASSERT_EQ(cli("gensun --out " + q(t / "clean") + " --count 1 --size 96"), 0);
  const fs::path in = t / "clean/sun_0000.solc";
  EXPECT_EQ(cli("clean --method fuller --in " + q(in) + " --out " + q(t / "f.solc") + " --mask-out " + q(t / "m.solc")), 0);
  EXPECT_EQ(read_mask(t / "m.solc").kind(), MaskKind::Transmittance);
  EXPECT_EQ(cli("clean --method feng --in " + q(in) + " --neighbour " + q(in) + " --out " + q(t / "g.solc")), 0);
  EXPECT_EQ(read_image(t / "g.solc"), read_image(in));
  EXPECT_EQ(cli("preprocess --in " + q(in) + " --out " + q(t / "p.solc") + " --size 128"), 0);
  EXPECT_EQ(read_image(t / "p.solc").width(), 128);
}

TEST(Cli, ErrorsGiveNonzeroExit) {
  TempDir t;
  EXPECT_EQ(cli("clean --method feng --in " + q(t / "missing.solc") + " --out " + q(t / "x.solc")), 2);
  EXPECT_NE(cli("bench --manifest " + q(t / "none.jsonl") + " --out " + q(t / "b")), 0);
  EXPECT_NE(cli("clean --method cgan --in a --out b"), 0);
  EXPECT_NE(cli("nonsense"), 0);
}
