#include <set>

#include <gtest/gtest.h>

#include "commentbench/affinity.hpp"
#include "commentbench/error.hpp"
#include "helpers.hpp"

using namespace commentbench;
using testing_helpers::TempDir;

namespace {

MethodRecord rec(std::string project, std::string cls, std::string name, std::string body = "work();",
                 std::string comment = "does something useful here", int params = 0, std::size_t line = 1) {
    MethodRecord r;
    r.project = std::move(project);
    r.path = cls + ".java";
    r.class_name = std::move(cls);
    r.method_name = std::move(name);
    r.param_count = params;
    r.line = line;
    r.comment = testing_helpers::seq(comment);
    r.body = std::move(body);
    return r;
}

// projects p0..p{np-1}, classes C0..C{nc-1}, methods m0..m{nm-1}
std::vector<MethodRecord> grid(int np, int nc, int nm) {
    std::vector<MethodRecord> out;
    for (int p = 0; p < np; ++p)
        for (int c = 0; c < nc; ++c)
            for (int m = 0; m < nm; ++m)
                out.push_back(rec("p" + std::to_string(p), "C" + std::to_string(c), "m" + std::to_string(m),
                                  "work();", "method " + std::to_string(m) + " of class " + std::to_string(c)));
    return out;
}

} // namespace

TEST(Extract, FixtureTree) {
    const auto result = extract_methods(testing_helpers::data_path("java"));
    EXPECT_EQ(result.files, 2u);
    EXPECT_EQ(result.undelimited, 1u);
    ASSERT_EQ(result.records.size(), 3u);
    const auto& r = result.records[1];
    EXPECT_EQ(r.project, "alpha");
    EXPECT_EQ(r.path, "src/org/alpha/Outer.java");
    EXPECT_EQ(r.class_name, "Outer.Inner");
    EXPECT_EQ(r.comment.joined(), "records a visit to the given node with a timestamp");
    EXPECT_EQ(r.id(), "alpha/src/org/alpha/Outer.java#Outer.Inner.visit@" + std::to_string(r.line));
}

TEST(Extract, FullCommentOption) {
    ExtractOptions o;
    o.full_comment = true;
    const auto result = extract_methods(testing_helpers::data_path("java"), o);
    EXPECT_EQ(result.records[0].comment.joined(),
              "computes the total weight of all entries . later sentences are ignored .");
}

TEST(Extract, SingleSourceAndEmptyComment) {
    ExtractResult stats;
    const auto recs = extract_from_source("class A { /** */ void f() { g(); } /** Runs. */ void run() { go(); } }", "p",
                                          "A.java", {}, &stats);
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].method_name, "run");
    EXPECT_EQ(stats.empty_comments, 1u);
}

TEST(Extract, MissingRoot) { EXPECT_THROW(extract_methods("/nonexistent/root"), DataError); }

TEST(Filter, GetterSetterHeuristic) {
    EXPECT_TRUE(is_getter_or_setter(rec("p", "A", "getFoo", "return foo;")));
    EXPECT_TRUE(is_getter_or_setter(rec("p", "A", "isReady", "return ready && ok;")));
    EXPECT_TRUE(is_getter_or_setter(rec("p", "A", "value", "  return this.value;\n")));
    EXPECT_TRUE(is_getter_or_setter(rec("p", "A", "assign", "this.x = x;")));
    EXPECT_FALSE(is_getter_or_setter(rec("p", "A", "compute", "int y = x * 2; return y;")));
    EXPECT_FALSE(is_getter_or_setter(rec("p", "A", "getaway", "run();")));
    EXPECT_FALSE(is_getter_or_setter(rec("p", "A", "check", "if (x == 1) run();")));
    EXPECT_FALSE(is_getter_or_setter(rec("p", "A", "close", "")));
}

TEST(Filter, TenRecordFixture) {
    // 2 getters, 1 setter, 1 overload pair -> 10 - 3 - 1 = 6 survive
    std::vector<MethodRecord> records{
        rec("p", "A", "getName", "return name;"),
        rec("p", "A", "getSize", "return size;"),
        rec("p", "A", "setName", "this.name = name;"),
        rec("p", "A", "compute", "int y = x + 1; log(y);", "computes", 1, 10),
        rec("p", "A", "compute", "long y = x + 1; log(y);", "computes long", 1, 20),
        rec("p", "A", "render", "draw(); flush();"),
        rec("p", "B", "render", "draw(); flush();"),
        rec("p", "B", "close", "stream.close(); done = true;"),
        rec("q", "A", "compute", "run(); run();"),
        rec("q", "C", "parse", "tokens(); tree();"),
    };
    const auto kept = filter_records(records);
    ASSERT_EQ(kept.size(), 6u);
    EXPECT_EQ(kept[0].method_name, "compute");
    EXPECT_EQ(kept[0].line, 10u);
    EXPECT_EQ(filter_records(kept).size(), kept.size());
}

TEST(Sample, InterProjectNeedsTwoProjects) {
    const auto records = grid(1, 3, 4);
    EXPECT_THROW(sample_pairs(records, AffinityKind::inter_project, 10, 1), DataError);
}

TEST(Sample, ConstraintsHold) {
    const auto records = grid(4, 3, 5);
    for (auto kind : {AffinityKind::inter_project, AffinityKind::intra_project, AffinityKind::intra_class}) {
        const auto pairs = sample_pairs(records, kind, 50, 8);
        ASSERT_EQ(pairs.size(), 50u);
        for (const auto& p : pairs) EXPECT_TRUE(satisfies(kind, records[p.reference], records[p.candidate]));
    }
}

TEST(Sample, IntraClassCap) {
    // one class with 20 methods, cap 6
    std::vector<MethodRecord> records;
    for (int m = 0; m < 20; ++m) records.push_back(rec("p", "Big", "m" + std::to_string(m)));
    const auto pairs = sample_pairs(records, AffinityKind::intra_class, 6, 3, 6);
    EXPECT_EQ(pairs.size(), 6u);
    std::set<std::pair<std::size_t, std::size_t>> distinct;
    for (const auto& p : pairs) distinct.insert(std::minmax(p.reference, p.candidate));
    EXPECT_EQ(distinct.size(), 6u);
    EXPECT_THROW(sample_pairs(records, AffinityKind::intra_class, 7, 3, 6), DataError);
}

TEST(Sample, Deterministic) {
    const auto records = grid(5, 4, 6);
    const auto a = sample_pairs(records, AffinityKind::intra_project, 200, 42);
    const auto b = sample_pairs(records, AffinityKind::intra_project, 200, 42);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].reference, b[i].reference);
        EXPECT_EQ(a[i].candidate, b[i].candidate);
    }
}

TEST(Report, IdenticalCommentsScoreHundred) {
    std::vector<MethodRecord> records;
    for (int m = 0; m < 4; ++m) records.push_back(rec("p", "A", "m" + std::to_string(m), "x();", "returns the cached value"));
    const std::vector<RecordPair> pairs{{0, 1}, {2, 3}, {1, 2}};
    const auto r = affinity_report(records, pairs, all_variants(), AffinityKind::intra_class, 0);
    EXPECT_EQ(r.n_pairs, 3u);
    for (const auto& v : r.variants) {
        EXPECT_DOUBLE_EQ(v.mean, 100.0) << variant_name(v.variant);
        EXPECT_DOUBLE_EQ(v.q1, 100.0);
        EXPECT_DOUBLE_EQ(v.q3, 100.0);
    }
}

TEST(Report, DisjointCommentsUnsmoothedZero) {
    std::vector<MethodRecord> records{rec("p", "A", "a", "x();", "alpha beta gamma delta"),
                                      rec("p", "A", "b", "x();", "one two three four")};
    const std::vector<RecordPair> pairs{{0, 1}};
    const auto r = affinity_report(records, pairs, all_variants(), AffinityKind::intra_class, 0);
    for (const auto& v : r.variants) {
        if (v.variant == BleuVariant::FC || v.variant == BleuVariant::Moses || v.variant == BleuVariant::M2)
            EXPECT_EQ(v.mean, 0.0) << variant_name(v.variant);
        EXPECT_LE(v.q1, v.median);
        EXPECT_LE(v.median, v.q3);
    }
    EXPECT_THROW(affinity_report(records, std::vector<RecordPair>{}, all_variants(), AffinityKind::intra_class, 0),
                 DataError);
}

TEST(Records, JsonlRoundTrip) {
    TempDir dir("aff");
    auto records = grid(2, 2, 2);
    records[0].body = "line one\n\"quoted\"";
    write_records(records, dir / "r.jsonl");
    const auto back = read_records(dir / "r.jsonl");
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].id(), records[i].id());
        EXPECT_EQ(back[i].comment, records[i].comment);
        EXPECT_EQ(back[i].body, records[i].body);
        EXPECT_EQ(back[i].param_count, records[i].param_count);
    }
    const auto pairs = sample_pairs(records, AffinityKind::inter_project, 5, 1);
    write_pairs(pairs, records, dir / "p.jsonl");
    const auto pb = read_pairs(dir / "p.jsonl", back);
    ASSERT_EQ(pb.size(), pairs.size());
    for (std::size_t i = 0; i < pb.size(); ++i) {
        EXPECT_EQ(pb[i].reference, pairs[i].reference);
        EXPECT_EQ(pb[i].candidate, pairs[i].candidate);
    }
}

TEST(Kinds, Names) {
    EXPECT_EQ(parse_affinity_kind("intra-class"), AffinityKind::intra_class);
    EXPECT_EQ(to_string(AffinityKind::inter_project), "inter_project");
    EXPECT_THROW(parse_affinity_kind("cross"), UsageError);
}
