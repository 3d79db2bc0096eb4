#include <cstdio>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "json.hpp"

using nlohmann::json;
using testing_helpers::TempDir;

namespace {

struct Result {
    int code = -1;
    std::string out;
    json parsed() const { return json::parse(out); }
};

Result run(const std::string& args, const std::filesystem::path& err) {
    const std::string cmd = std::string(CLI_PATH) + " " + args + " 2>" + err.string();
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

} // namespace

class Cli : public ::testing::Test {
  protected:
    TempDir dir{"cli"};
    Result run(const std::string& args) { return ::run(args, dir / "stderr.txt"); }
    std::string stderr_text() { return testing_helpers::slurp(dir / "stderr.txt"); }
};

TEST_F(Cli, IdenticalFilesScoreHundredUnderAllVariants) {
    const auto f = dir.write("a.txt", "returns the value of x\ncloses the open stream now\n");
    const auto r = run("score --cand " + q(f) + " --ref " + q(f) + " --variant all");
    ASSERT_EQ(r.code, 0) << stderr_text();
    const auto j = r.parsed();
    ASSERT_EQ(j["reports"].size(), 7u);
    for (const auto& rep : j["reports"]) EXPECT_EQ(rep["score"].get<double>(), 100.0) << rep["variant"];
    EXPECT_TRUE(stderr_text().empty());
}

TEST_F(Cli, ToyPairTokenizationSwing) {
    const auto c = dir.write("c.txt", "calls function foo()\n");
    const auto ref = dir.write("r.txt", "uses function foo()\n");
    auto score = [&](const char* tok) {
        const auto j = run("score --cand " + q(c) + " --ref " + q(ref) + " --variant M2 --variant DC --tokenizer " + tok)
                           .parsed();
        return std::pair(j["reports"][0]["score"].get<double>(), j["reports"][1]["score"].get<double>());
    };
    const auto [m2_ws, dc_ws] = score("whitespace");
    const auto [m2_p, dc_p] = score("punctuation");
    EXPECT_DOUBLE_EQ(m2_ws, 57.74);
    EXPECT_DOUBLE_EQ(m2_p, 75.21);
    EXPECT_DOUBLE_EQ(dc_ws, 28.65);
    EXPECT_DOUBLE_EQ(dc_p, 66.87);
}

TEST_F(Cli, ConformanceGolden) {
    const auto golden = json::parse(testing_helpers::slurp(testing_helpers::data_path("conformance/golden.json")));
    const auto r = run("score --cand " + q(testing_helpers::data_path("conformance/cand.txt")) + " --ref " +
                       q(testing_helpers::data_path("conformance/ref.txt")) + " --variant all --tokenizer " +
                       golden["tokenizer"].get<std::string>());
    ASSERT_EQ(r.code, 0) << stderr_text();
    const auto j = r.parsed();
    for (const auto& rep : j["reports"])
        EXPECT_EQ(rep["score"].get<double>(), golden["scores"][rep["variant"].get<std::string>()].get<double>())
            << rep["variant"];
}

TEST_F(Cli, ExitCodes) {
    const auto f = dir.write("a.txt", "a b c d\n");
    const auto g = dir.write("b.txt", "a b c d\ne f g h\n");
    EXPECT_EQ(run("score --cand " + q(f) + " --ref " + q(f) + " --variant nope").code, 1);
    EXPECT_EQ(run("score --cand " + q(f) + " --ref " + q(g)).code, 2);
    EXPECT_EQ(run("score --cand " + q(f)).code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("analyze ablate --corpus " + q(f) + " --out-dir " + q(dir / "o")).code, 1); // no --seed
}

TEST_F(Cli, ScoreOutWritesManifest) {
    const auto f = dir.write("a.txt", "a b c d\n");
    ASSERT_EQ(run("score --cand " + q(f) + " --ref " + q(f) + " --out " + q(dir / "rep.json")).code, 0);
    const auto m = json::parse(testing_helpers::slurp(dir / "rep.json.manifest.json"));
    EXPECT_EQ(m["command"], "score");
    EXPECT_EQ(m["inputs"].size(), 2u);
    EXPECT_EQ(m["inputs"][0]["sha256"].get<std::string>().size(), 64u);
    EXPECT_TRUE(m.contains("version"));
    EXPECT_TRUE(m.contains("timestamp"));
}

TEST_F(Cli, BivariateUndefinedAndAdjusted) {
    std::string same, varied;
    for (int i = 0; i < 20; ++i) {
        same += R"({"src": "int get value x", "tgt": "returns the value x"})" "\n";
        varied += "{\"src\": \"int get v" + std::to_string(i % 5) + " x y\", \"tgt\": \"returns the v" +
                  std::to_string(i % 4) + " of y\"}\n";
    }
    const auto a = dir.write("same.jsonl", same);
    const auto b = dir.write("varied.jsonl", varied);
    const auto c = dir.write("varied2.jsonl", varied);
    const auto r = run("analyze bivariate --corpus " + q(a) + " --corpus " + q(b) + " --corpus " + q(c) +
                       " --count 300 --seed 5 --bins 10 --out-dir " + q(dir / "biv"));
    ASSERT_EQ(r.code, 0) << stderr_text();
    const auto j = r.parsed();
    EXPECT_TRUE(j["bivariate"][0]["all"]["undefined"].get<bool>());
    EXPECT_TRUE(j["bivariate"][0]["all"]["rho"].is_null());
    for (int i : {1, 2}) {
        const auto& nz = j["bivariate"][i]["nonzero"];
        ASSERT_FALSE(nz["undefined"].get<bool>());
        EXPECT_GE(nz["p_adjusted"].get<double>(), nz["p"].get<double>());
    }
    EXPECT_EQ(j["bivariate"][2]["corpus"], "varied2");
    for (const char* f : {"manifest.json", "correlations.csv", "hexbin_same.svg", "bivariate_varied.csv"})
        EXPECT_TRUE(std::filesystem::exists(dir / "biv" / f)) << f;
}

TEST_F(Cli, ZipfTemplatedSteeper) {
    std::string templ, shuffled;
    for (int i = 0; i < 200; ++i) {
        templ += "{\"src\": \"x\", \"tgt\": \"returns the value of the w" + std::to_string(i % 50) + "\"}\n";
        shuffled += "{\"src\": \"x\", \"tgt\": \"w" + std::to_string((i * 7) % 53) + " w" + std::to_string((i * 11) % 47) +
                    " w" + std::to_string((i * 13) % 41) + " w" + std::to_string((i * 3) % 59) + "\"}\n";
    }
    const auto a = dir.write("templ.jsonl", templ);
    const auto b = dir.write("shuf.jsonl", shuffled);
    const auto r = run("analyze zipf --corpus " + q(a) + " --corpus " + q(b) + " --head 10 --out-dir " + q(dir / "z"));
    ASSERT_EQ(r.code, 0) << stderr_text();
    const auto j = r.parsed();
    EXPECT_LT(j["zipf"][0]["slope"].get<double>(), j["zipf"][1]["slope"].get<double>());
    EXPECT_TRUE(std::filesystem::exists(dir / "z" / "zipf.svg"));
}

TEST_F(Cli, AblateWritesCurve) {
    const auto a = dir.write("c.jsonl", R"({"src": "x", "tgt": "a b c d"}
{"src": "y", "tgt": "a b c d"}
)");
    const auto r = run("analyze ablate --corpus " + q(a) + " --n 1 --k-max 2 --seed 3 --out-dir " + q(dir / "ab"));
    ASSERT_EQ(r.code, 0) << stderr_text();
    const auto pts = r.parsed()["ablation"][0]["points"];
    EXPECT_EQ(pts[0]["bleu4_mean"].get<double>(), 100.0);
    EXPECT_EQ(pts[1]["bleu4_mean"].get<double>(), 65.8);
    const auto csv = testing_helpers::slurp(dir / "ab" / "ablation.csv");
    EXPECT_EQ(csv.rfind("corpus,n,k,bleu4_mean\r\n", 0), 0u);
    EXPECT_EQ(run("analyze ablate --corpus " + q(a) + " --n 2 --seed 3 --out-dir " + q(dir / "ab")).code, 1);
}

TEST_F(Cli, IrWorkflow) {
    std::string train;
    for (int i = 0; i < 30; ++i)
        train += "{\"id\": \"t" + std::to_string(i) + "\", \"src\": \"void run" + std::to_string(i) +
                 " ( ) { go ( ) ; }\", \"tgt\": \"runs task number " + std::to_string(i) + " now\"}\n";
    const auto t = dir.write("train.jsonl", train);
    const auto snap = dir / "idx.bin";
    ASSERT_EQ(run("ir index --train " + q(t) + " --snapshot " + q(snap)).code, 0) << stderr_text();
    EXPECT_TRUE(std::filesystem::exists(dir / "idx.bin.manifest.json"));
    const auto oov = run("ir query --snapshot " + q(snap) + " --code 'zzz qqq'");
    ASSERT_EQ(oov.code, 0);
    EXPECT_TRUE(oov.parsed()["hits"].empty());
    EXPECT_TRUE(oov.parsed()["fallback"].get<bool>());
    EXPECT_NE(stderr_text().find("fallback"), std::string::npos);
    const auto hit = run("ir query --snapshot " + q(snap) + " --code 'void run7 ( )' --k 1");
    EXPECT_EQ(hit.parsed()["hits"][0]["id"], "t7");
    const auto ev = run("ir eval --snapshot " + q(snap) + " --test " + q(t) + " --variant all --tsv " + q(dir / "e.tsv"));
    ASSERT_EQ(ev.code, 0) << stderr_text();
    for (const auto& rep : ev.parsed()["reports"]) EXPECT_EQ(rep["score"].get<double>(), 100.0);
    EXPECT_EQ(ev.parsed()["fallbacks"], 0);
    const auto tsv = testing_helpers::slurp(dir / "e.tsv");
    EXPECT_EQ(tsv.rfind("id\tretrieved_doc\tscore_CN", 0), 0u);
    EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 31);
    EXPECT_EQ(run("ir eval --test " + q(t)).code, 1);
    EXPECT_EQ(run("ir query --snapshot " + q(dir / "missing.bin") + " --code x").code, 2);
}

TEST_F(Cli, AffinityWorkflow) {
    const auto recs = dir / "r.jsonl";
    auto ex = run("affinity extract --root " + q(testing_helpers::data_path("java")) + " --out " + q(recs) +
                  " --no-filter");
    ASSERT_EQ(ex.code, 0) << stderr_text();
    EXPECT_EQ(ex.parsed()["records"], 3);
    EXPECT_EQ(ex.parsed()["undelimited"], 1);
    // only project "alpha" has records
    EXPECT_EQ(run("affinity sample --records " + q(recs) + " --kind inter_project --count 2 --seed 1 --out " +
                  q(dir / "p.jsonl"))
                  .code,
              2);
    EXPECT_NE(stderr_text().find("data error"), std::string::npos);
    ASSERT_EQ(run("affinity sample --records " + q(recs) + " --kind intra_class --count 1 --seed 1 --out " +
                  q(dir / "p.jsonl"))
                  .code,
              0)
        << stderr_text();
    const auto r1 = run("affinity report --records " + q(recs) + " --pairs " + q(dir / "p.jsonl") +
                        " --kind intra_class --out-dir " + q(dir / "rep"));
    ASSERT_EQ(r1.code, 0) << stderr_text();
    EXPECT_EQ(r1.parsed()["reports"][0]["n_pairs"], 1);
    EXPECT_TRUE(std::filesystem::exists(dir / "rep" / "affinity_violin.svg"));
    EXPECT_TRUE(std::filesystem::exists(dir / "rep" / "affinity_intra_class.csv"));
}

TEST_F(Cli, AffinityReportDeterministic) {
    for (int p = 0; p < 3; ++p)
        for (int c = 0; c < 3; ++c) {
            std::string src = "package x;\npublic class K" + std::to_string(c) + " {\n";
            for (int m = 0; m < 4; ++m)
                src += "  /** Handles item " + std::to_string(m) + " in class " + std::to_string(c) +
                       ". */\n  void handle" + std::to_string(m) + "(int a) { a++; a--; }\n";
            src += "}\n";
            dir.write("src/p" + std::to_string(p) + "/K" + std::to_string(c) + ".java", src);
        }
    const auto recs = dir / "r.jsonl";
    ASSERT_EQ(run("affinity extract --root " + q(dir / "src") + " --out " + q(recs)).code, 0) << stderr_text();
    const std::string cmd = "affinity report --records " + q(recs) + " --count 20 --seed 9 --variant M2 --out-dir ";
    const auto a = run(cmd + q(dir / "a"));
    const auto b = run(cmd + q(dir / "b"));
    ASSERT_EQ(a.code, 0) << stderr_text();
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.parsed()["reports"].size(), 3u);
    EXPECT_EQ(run("affinity report --records " + q(recs) + " --count 20 --out-dir " + q(dir / "c")).code, 1);
}

TEST_F(Cli, Stats) {
    const auto r = run("stats --corpus " + q(testing_helpers::data_path("stats10.jsonl")));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.parsed()["stats"][0]["source"]["tokens"], 27);
}
