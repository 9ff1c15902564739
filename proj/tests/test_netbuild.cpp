#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "walkcensus/netbuild.hpp"
#include "walkcensus/prng.hpp"

using namespace walkcensus;

TEST_CASE("message ingestion") {
    std::istringstream in(
        "user,timestamp,text,urls\n"
        "bob,200,\"second, with comma\",http://a;http://b\n"
        "alice,100,first,\n");
    auto recs = ingest_messages(in);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].user == "alice"); // sorted by time
    CHECK(recs[0].urls.empty());
    CHECK(recs[1].user == "bob");
    CHECK(recs[1].text == "second, with comma");
    CHECK(recs[1].urls == std::vector<std::string>{"http://a", "http://b"});

    std::istringstream quoted("u1,5,\"line\nbreak \"\"quoted\"\"\",x\n");
    auto q = ingest_messages(quoted);
    REQUIRE(q.size() == 1);
    CHECK(q[0].text == "line\nbreak \"quoted\"");

    std::istringstream bad("u1,notatime,text,\n");
    CHECK_THROWS_AS(ingest_messages(bad), parse_error);
    std::istringstream short_row("u1,5,text\n");
    CHECK_THROWS_AS(ingest_messages(short_row), parse_error);
}

TEST_CASE("restricted damerau-levenshtein distances") {
    CHECK(restricted_damerau_levenshtein("", "") == 0);
    CHECK(restricted_damerau_levenshtein("same", "same") == 0);
    CHECK(restricted_damerau_levenshtein("abc", "acb") == 1);
    CHECK(restricted_damerau_levenshtein("kitten", "sitting") == 3);
    // the classic OSA case where true Damerau-Levenshtein would give 2
    CHECK(restricted_damerau_levenshtein("ca", "abc") == 3);
    CHECK(restricted_damerau_levenshtein("abc", "") == 3);
}

TEST_CASE("distance symmetry and banded agreement on random strings") {
    CounterRng rng(5, Stream::generic);
    auto random_string = [&](int maxlen) {
        int len = int(rng.below(std::uint64_t(maxlen + 1)));
        std::string s;
        for (int i = 0; i < len; ++i) s.push_back(char('a' + rng.below(4)));
        return s;
    };
    for (int rep = 0; rep < 300; ++rep) {
        std::string a = random_string(14), b = random_string(14);
        int d = restricted_damerau_levenshtein(a, b);
        CHECK(restricted_damerau_levenshtein(b, a) == d);
        CHECK((d == 0) == (a == b));
        for (int cap : {0, 1, 2, 3, 5, 8, 14}) {
            CHECK(osa_within(a, b, cap) == (d <= cap));
        }
    }
}

TEST_CASE("aggregate url network") {
    std::vector<MessageRecord> recs{
        {"a", 10, "x", {"u1"}},
        {"b", 20, "y", {"u1"}},
        {"c", 30, "z", {"u2"}},
        {"d", 45, "w", {"u2"}},
        {"e", 50, "v", {"u3"}},
    };
    Graph g1 = aggregate_url_network(recs, 25);
    CHECK(g1.node_count() == 2); // a-b share u1; c,d,e not yet / isolated
    CHECK(g1.edge_count() == 1);
    Graph g2 = aggregate_url_network(recs, 45);
    CHECK(g2.node_count() == 4);
    CHECK(g2.edge_count() == 2); // monotone growth
    Graph g3 = aggregate_url_network(recs, 9);
    CHECK(g3.node_count() == 0);
}

TEST_CASE("windowed similarity network") {
    std::vector<MessageRecord> recs{
        {"a", 100, "breaking news about the release", {}},
        {"b", 150, "breaking news about the release!", {}},
        {"c", 160, "completely different topic entirely, nothing shared at all", {}},
        {"d", 500, "breaking news about the release", {}}, // outside window
    };
    WindowSpec w{0, 400};
    Graph g = windowed_similarity_network(recs, w, 5);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.labels() == std::vector<std::string>{"a", "b"});
    // edge count is monotone in the threshold
    std::size_t prev = 0;
    for (int cap : {0, 5, 20, 40, 60}) {
        Graph gc = windowed_similarity_network(recs, w, cap);
        CHECK(gc.edge_count() >= prev);
        prev = gc.edge_count();
    }
    Graph all = windowed_similarity_network(recs, {0, 600}, 5);
    CHECK(all.node_count() == 3); // a, b, d mutually close
    CHECK(all.edge_count() == 3);
    CHECK_THROWS(windowed_similarity_network(recs, {400, 100}, 5));
}

TEST_CASE("window message cap") {
    std::vector<MessageRecord> many;
    many.reserve(100001);
    for (int i = 0; i <= 100000; ++i) many.push_back({"u" + std::to_string(i % 7), 10, "t", {}});
    CHECK_THROWS(windowed_similarity_network(many, {0, 20}, 3));
}
