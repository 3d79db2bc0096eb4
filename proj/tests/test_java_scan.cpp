#include <gtest/gtest.h>

#include "commentbench/java_scan.hpp"
#include "helpers.hpp"

using namespace commentbench;

TEST(JavaScan, NestedClassFixture) {
    const auto src = testing_helpers::slurp(testing_helpers::data_path("java/alpha/src/org/alpha/Outer.java"));
    const auto scan = scan_java(src);
    ASSERT_EQ(scan.methods.size(), 3u);
    EXPECT_EQ(scan.undelimited, 0u);

    EXPECT_EQ(scan.methods[0].class_name, "Outer");
    EXPECT_EQ(scan.methods[0].method_name, "totalWeight");
    EXPECT_EQ(scan.methods[0].param_count, 1);
    EXPECT_EQ(scan.methods[0].line, 21u);
    EXPECT_EQ(first_sentence(scan.methods[0].doc_comment), "Computes the total weight of all entries");

    EXPECT_EQ(scan.methods[1].class_name, "Outer.Inner");
    EXPECT_EQ(scan.methods[1].method_name, "visit");
    EXPECT_EQ(scan.methods[1].param_count, 2);
    EXPECT_EQ(first_sentence(scan.methods[1].doc_comment), "Records a visit to the given node with a timestamp");

    EXPECT_EQ(scan.methods[2].class_name, "Outer");
    EXPECT_EQ(scan.methods[2].method_name, "entries");
    EXPECT_EQ(first_sentence(scan.methods[2].doc_comment), "Returns the entry list for a key spanning two lines");
    EXPECT_NE(scan.methods[2].body.find("return table.get(key);"), std::string::npos);
}

TEST(JavaScan, UndocumentedMethodsIgnored) {
    const auto scan = scan_java("class A { void f() {} /* not doc */ void g() {} // x\n void h() {} }");
    EXPECT_TRUE(scan.methods.empty());
}

TEST(JavaScan, UnclosedBodyCounted) {
    const auto src = testing_helpers::slurp(testing_helpers::data_path("java/beta/Broken.java"));
    const auto scan = scan_java(src);
    EXPECT_TRUE(scan.methods.empty());
    EXPECT_EQ(scan.undelimited, 1u);
}

TEST(JavaScan, AbstractAndInterfaceMethods) {
    const auto scan = scan_java(R"(interface Shape {
        /** Area of the shape. */
        double area();
        /** Scales by a factor. */
        default Shape scale(double f, java.util.Map<String, Integer> m) { return this; }
    })");
    ASSERT_EQ(scan.methods.size(), 2u);
    EXPECT_EQ(scan.methods[0].method_name, "area");
    EXPECT_EQ(scan.methods[0].param_count, 0);
    EXPECT_TRUE(scan.methods[0].body.empty());
    EXPECT_EQ(scan.methods[1].param_count, 2);
}

TEST(JavaScan, DocOnFieldIsNotCarriedToMethod) {
    const auto scan = scan_java("class A { /** A counter. */ int n = 0; void f() {} }");
    EXPECT_TRUE(scan.methods.empty());
}

TEST(Javadoc, FirstSentenceRules) {
    EXPECT_EQ(first_sentence("/** Returns x. More text. */"), "Returns x");
    EXPECT_EQ(first_sentence("/** Uses java.util.List as input. */"), "Uses java.util.List as input");
    EXPECT_EQ(first_sentence("/**\n * First paragraph\n *\n * second paragraph.\n */"), "First paragraph");
    EXPECT_EQ(first_sentence("/** No period at all */"), "No period at all");
    EXPECT_EQ(first_sentence("/** @return only tags */"), "");
    EXPECT_EQ(first_sentence("/** Summary<p>Details. */"), "Summary");
}

TEST(Javadoc, DescriptionStripsMarkup) {
    EXPECT_EQ(javadoc_description("/**\n * Links {@link Foo#bar} and <i>style</i>.\n * Next line.\n * @param x ignored\n */"),
              "Links Foo#bar and style . Next line.");
}
