#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "wordmap/cli.hpp"

namespace wordmap {
namespace {

using testing::read_file;
using testing::TempDir;

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string p(const std::filesystem::path& path) { return path.string(); }

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, cli::kUsage);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
    auto r = run({"stats", "--corpus", "x", "--bogus"});
    EXPECT_EQ(r.code, cli::kUsage);
    EXPECT_FALSE(r.err.empty());
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(run({"align", "--method", "magic", "--src", "a", "--tgt", "b", "--output", "c"}).code, cli::kUsage);
    EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, MissingFileIsDataError) {
    auto r = run({"stats", "--corpus", "/nonexistent/corpus.txt"});
    EXPECT_EQ(r.code, cli::kData);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Cli, MalformedInputIsDataError) {
    TempDir dir;
    testing::write_file(dir / "bad.vec", "a 1 0\nb 1\n");
    testing::write_file(dir / "lex.txt", "a\tb\n");
    auto r = run({"align", "--src", p(dir / "bad.vec"), "--tgt", p(dir / "bad.vec"), "--lexicon",
                  p(dir / "lex.txt"), "--output", p(dir / "w.map")});
    EXPECT_EQ(r.code, cli::kData);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, SupervisedMethodNeedsLexicon) {
    TempDir dir;
    ASSERT_EQ(run({"synth", "--n", "50", "--d", "4", "--train", "10", "--test", "10", "--out", p(dir.path())}).code, 0);
    auto r = run({"align", "--method", "rcsls", "--src", p(dir / "src.vec"), "--tgt", p(dir / "tgt.vec"),
                  "--output", p(dir / "w.map")});
    EXPECT_EQ(r.code, cli::kUsage);
}

TEST(Cli, NumericalFailureExitCode) {
    TempDir dir;
    ASSERT_EQ(run({"synth", "--n", "100", "--d", "4", "--train", "10", "--test", "10", "--out", p(dir.path())}).code, 0);
    auto r = run({"align", "--method", "adversarial", "--src", p(dir / "src.vec"), "--tgt", p(dir / "tgt.vec"),
                  "--output", p(dir / "w.map"), "--disc-hidden", "8", "--epochs", "1", "--epoch-size", "320",
                  "--map-lr", "1e300", "--disc-lr", "1e300"});
    EXPECT_EQ(r.code, cli::kNumerical);
}

TEST(Cli, NoiselessPipelineScoresPerfectly) {
    TempDir dir;
    auto s = run({"synth", "--n", "2000", "--d", "50", "--noise", "0", "--seed", "1", "--out", p(dir.path())});
    ASSERT_EQ(s.code, 0) << s.err;
    for (const char* f : {"src.vec", "tgt.vec", "lexicon.txt", "truth.map", "train.txt", "test.txt"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
        EXPECT_TRUE(std::filesystem::exists(dir / (std::string(f) + ".manifest"))) << f;
    }
    auto a = run({"align", "--method", "procrustes", "--src", p(dir / "src.vec"), "--tgt", p(dir / "tgt.vec"),
                  "--lexicon", p(dir / "train.txt"), "--output", p(dir / "w.map")});
    ASSERT_EQ(a.code, 0) << a.err;
    auto e = run({"eval", "--map", p(dir / "w.map"), "--src", p(dir / "src.vec"), "--tgt", p(dir / "tgt.vec"),
                  "--lexicon", p(dir / "test.txt"), "--method", "csls"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(e.out, "P@1 1.0000 P@5 1.0000 P@10 1.0000 queries 500\n");
}

TEST(Cli, EvalBothPrintsOneLinePerMethod) {
    TempDir dir;
    ASSERT_EQ(run({"synth", "--n", "300", "--d", "10", "--noise", "0.3", "--train", "100", "--test", "100",
                   "--out", p(dir.path())}).code, 0);
    ASSERT_EQ(run({"align", "--src", p(dir / "src.vec"), "--tgt", p(dir / "tgt.vec"), "--lexicon",
                   p(dir / "train.txt"), "--output", p(dir / "w.map")}).code, 0);
    auto e = run({"eval", "--map", p(dir / "w.map"), "--src", p(dir / "src.vec"), "--tgt", p(dir / "tgt.vec"),
                  "--lexicon", p(dir / "test.txt"), "--method", "both", "--per-query", "--baseline-trials", "100"});
    ASSERT_EQ(e.code, 0) << e.err;
    std::istringstream lines(e.out);
    std::string line;
    int nn = 0, csls = 0, per_query = 0, baseline = 0;
    while (std::getline(lines, line)) {
        if (line.starts_with("P@1 ")) {
            nn += line.ends_with(" method nn");
            csls += line.ends_with(" method csls");
        } else if (line.find(" -> ") != std::string::npos) {
            ++per_query;
        } else if (line.starts_with("random P@1 analytic 0.01 ")) {
            ++baseline;
        }
    }
    EXPECT_EQ(nn, 1);
    EXPECT_EQ(csls, 1);
    EXPECT_EQ(per_query, 200);
    EXPECT_EQ(baseline, 1);
}

TEST(Cli, CleanStatsTrainTranslate) {
    TempDir dir;
    std::string raw;
    for (int i = 0; i < 200; ++i)
        raw += "Di pikin " + std::to_string(i % 7) + " dey chop rice! Na so e be.\nDi pikin dey chop rice!\n";
    testing::write_file(dir / "raw.txt", raw);

    auto c = run({"clean", "--input", p(dir / "raw.txt"), "--output", p(dir / "clean.txt")});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_NE(c.out.find("sentences\t8"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "clean.txt.manifest"));

    auto s = run({"stats", "--corpus", p(dir / "clean.txt")});
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(s.out, "sentences\t8\ntokens\t75\nunique_words\t16\n");
    auto raw_stats = run({"stats", "--corpus", p(dir / "raw.txt"), "--clean"});
    EXPECT_EQ(raw_stats.out, s.out);

    testing::write_file(dir / "pre.vec", "2 4\npikin 1 0 0 0\nrice 0 1 0 0\n");
    auto t = run({"train-embed", "--corpus", p(dir / "clean.txt"), "--output", p(dir / "emb.vec"), "--init",
                  p(dir / "pre.vec"), "--dim", "4", "--epochs", "2", "--min-count", "1", "--freeze-init"});
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_NE(t.out.find("vocab\t16"), std::string::npos);
    std::ifstream emb_in(dir / "emb.vec");
    auto emb = read_embedding(emb_in);
    EXPECT_EQ(emb.row("rice"), (Eigen::RowVector4d(0, 1, 0, 0)));

    auto x = run({"translate", "--map", p(dir / "id.map"), "--src", p(dir / "emb.vec"), "--tgt", p(dir / "emb.vec"),
                  "--word", "rice"});
    EXPECT_EQ(x.code, cli::kData);
    testing::write_file(dir / "id.map", "4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    x = run({"translate", "--map", p(dir / "id.map"), "--src", p(dir / "emb.vec"), "--tgt", p(dir / "emb.vec"),
             "--word", "rice", "--word", "pikin", "--method", "nn", "--top", "2"});
    ASSERT_EQ(x.code, 0) << x.err;
    EXPECT_TRUE(x.out.starts_with("rice\trice\t1\n"));
    EXPECT_NE(x.out.find("pikin\tpikin\t1\n"), std::string::npos);
    auto missing = run({"translate", "--map", p(dir / "id.map"), "--src", p(dir / "emb.vec"), "--tgt",
                        p(dir / "emb.vec"), "--word", "zzz"});
    EXPECT_EQ(missing.code, cli::kData);
}

TEST(Cli, ManifestRecordsParametersAndDigests) {
    TempDir dir;
    ASSERT_EQ(run({"synth", "--n", "100", "--d", "5", "--train", "20", "--test", "20", "--seed", "4",
                   "--out", p(dir.path())}).code, 0);
    auto m = read_file(dir / "src.vec.manifest");
    EXPECT_TRUE(m.starts_with("subcommand\tsynth\ntool_version\t"));
    EXPECT_NE(m.find("param.seed\t4\n"), std::string::npos);
    EXPECT_NE(m.find("param.d\t5\n"), std::string::npos);
    EXPECT_NE(m.find("param.noise\t0\n"), std::string::npos);

    ASSERT_EQ(run({"align", "--src", p(dir / "src.vec"), "--tgt", p(dir / "tgt.vec"), "--lexicon",
                   p(dir / "train.txt"), "--output", p(dir / "w.map")}).code, 0);
    auto a = read_file(dir / "w.map.manifest");
    EXPECT_NE(a.find("param.method\tprocrustes\n"), std::string::npos);
    EXPECT_NE(a.find("input.src.sha256\t"), std::string::npos);
    EXPECT_NE(a.find("input.lexicon.sha256\t"), std::string::npos);
    EXPECT_EQ(a.find(p(dir.path())), std::string::npos);
}

// Every stage run twice into separate directories: identical manifests and
// byte-identical outputs.
TEST(Cli, PipelineIsReproducible) {
    TempDir one, two;
    std::string raw;
    for (int i = 0; i < 300; ++i) raw += "w" + std::to_string(i % 13) + " w" + std::to_string(i % 7) + " x y\n";
    for (auto* d : {&one, &two}) {
        const auto& dir = *d;
        testing::write_file(dir / "raw.txt", raw);
        ASSERT_EQ(run({"clean", "--input", p(dir / "raw.txt"), "--output", p(dir / "c.txt")}).code, 0);
        ASSERT_EQ(run({"train-embed", "--corpus", p(dir / "c.txt"), "--output", p(dir / "e.vec"), "--dim", "8",
                       "--min-count", "1", "--epochs", "2"}).code, 0);
        ASSERT_EQ(run({"synth", "--n", "300", "--d", "8", "--noise", "0.1", "--train", "100", "--test", "100",
                       "--shape", "anisotropic", "--out", p(dir / "syn")}).code, 0);
        const auto syn = dir / "syn";
        for (const char* method : {"procrustes", "rcsls", "adversarial"}) {
            ASSERT_EQ(run({"align", "--method", method, "--src", p(syn / "src.vec"), "--tgt", p(syn / "tgt.vec"),
                           "--lexicon", p(syn / "train.txt"), "--output", p(dir / (std::string(method) + ".map")),
                           "--refine", "1", "--disc-hidden", "16", "--epochs", "1", "--epoch-size", "640",
                           "--rcsls-epochs", "3"}).code, 0) << method;
        }
    }
    for (const char* f : {"c.txt", "e.vec", "syn/src.vec", "syn/tgt.vec", "syn/train.txt", "syn/test.txt",
                          "syn/truth.map", "procrustes.map", "rcsls.map", "adversarial.map"}) {
        EXPECT_EQ(read_file(one / f), read_file(two / f)) << f;
        EXPECT_EQ(read_file(one / (std::string(f) + ".manifest")), read_file(two / (std::string(f) + ".manifest"))) << f;
        EXPECT_FALSE(read_file(one / f).empty()) << f;
    }
}

}  // namespace
}  // namespace wordmap
