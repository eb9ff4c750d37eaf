#include <gtest/gtest.h>

#include <random>

#include "kposet/poset.hpp"

using namespace kposet;

namespace {

std::vector<std::string> words_up_to(const std::string& alpha, std::size_t max_len) {
    std::vector<std::string> out{""};
    std::vector<std::string> layer{""};
    for (std::size_t l = 1; l <= max_len; ++l) {
        std::vector<std::string> next;
        for (const auto& w : layer)
            for (char c : alpha) next.push_back(w + c);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

// Lexicographic order written from the definition: u <= v iff u = v, u is
// a proper prefix of v, or the first differing symbols are ordered.
bool lexico_oracle(const std::string& u, const std::string& v, const std::function<bool(char, char)>& lt) {
    if (u == v) return true;
    if (v.rfind(u, 0) == 0) return true;
    for (std::size_t i = 0; i < u.size() && i < v.size(); ++i)
        if (u[i] != v[i]) return lt(u[i], v[i]);
    return false;
}

void check_order_laws(const Poset& p, std::uint64_t rank_span, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        const auto a = p.unrank(rng() % rank_span), b = p.unrank(rng() % rank_span), c = p.unrank(rng() % rank_span);
        ASSERT_TRUE(p.leq(a, a));
        if (p.leq(a, b) && p.leq(b, a)) ASSERT_EQ(a, b) << p.spec();
        if (p.leq(a, b) && p.leq(b, c)) ASSERT_TRUE(p.leq(a, c)) << p.spec();
    }
}

}  // namespace

TEST(PosetSpec, Examples) {
    EXPECT_TRUE(parse_poset_spec("nat").leq(integer(3), integer(5)));
    EXPECT_TRUE(parse_poset_spec("rev(nat)").leq(integer(5), integer(3)));
    const auto p = parse_poset_spec("prefix:ab");
    EXPECT_TRUE(p.leq(word("a"), word("ab")));
    EXPECT_FALSE(p.leq(word("a"), word("b")));
}

TEST(PosetSpec, PrintParseRoundTrip) {
    for (const char* s : {"nat", "int", "prefix:ab", "lexico:a<b", "lexico:a<b;c", "lexico:a<b<c", "finsets", "reg:ab",
                          "rev(nat)", "discrete(prefix:abc)", "rev(discrete(lexico:a<b;c))"}) {
        const auto p = parse_poset_spec(s);
        EXPECT_EQ(p.spec(), s);
        EXPECT_EQ(parse_poset_spec(p.spec()).spec(), p.spec());
    }
}

TEST(PosetSpec, ErrorsNameTheToken) {
    for (const char* s : {"", "nats", "rev(nat", "prefix:", "lexico:a<", "lexico:a<b<a", "bogus", "reg:a+"}) {
        try {
            parse_poset_spec(s);
            ADD_FAILURE() << "accepted " << s;
        } catch (const ParseError& e) {
            EXPECT_NE(std::string(e.what()).find("at '"), std::string::npos) << e.what();
        }
    }
}

TEST(Leq, Examples) {
    const auto lex = parse_poset_spec("lexico:a<b");
    EXPECT_TRUE(lex.leq(word("aab"), word("ab")));
    const auto part = parse_poset_spec("lexico:a<b;c");
    EXPECT_FALSE(part.leq(word("a"), word("c")));
    EXPECT_FALSE(part.leq(word("c"), word("a")));
    EXPECT_TRUE(part.leq(word("ca"), word("cb")));
    EXPECT_FALSE(part.comparable(word("ac"), word("c")));
    const auto fs = parse_poset_spec("finsets");
    EXPECT_TRUE(fs.leq(FinSet::of({1, 2}), FinSet::of({1, 2, 3})));
}

TEST(Leq, InvalidElementIsDomainError) {
    EXPECT_THROW(parse_poset_spec("nat").leq(integer(-1), integer(2)), DomainError);
    EXPECT_THROW(parse_poset_spec("prefix:ab").leq(word("c"), word("a")), DomainError);
    EXPECT_THROW(parse_poset_spec("nat").leq(word("a"), integer(2)), DomainError);
    EXPECT_THROW(parse_poset_spec("finsets").leq(FinSet{{3, 1}}, FinSet{}), DomainError);
}

TEST(Rank, Examples) {
    EXPECT_EQ(parse_poset_spec("nat").unrank(7), integer(7));
    const auto p = parse_poset_spec("prefix:ab");
    EXPECT_EQ(p.unrank(0), word(""));
    EXPECT_EQ(p.unrank(1), word("a"));
    EXPECT_EQ(p.unrank(2), word("b"));
    EXPECT_EQ(p.unrank(3), word("aa"));
    EXPECT_EQ(parse_poset_spec("int").unrank(4), integer(-2));
    EXPECT_EQ(parse_poset_spec("finsets").unrank(6), Element(FinSet::of({1, 2})));
}

TEST(Rank, MutuallyInverse) {
    for (const char* s : {"nat", "int", "prefix:ab", "lexico:a<b;c", "finsets", "rev(int)", "discrete(prefix:abc)"}) {
        const auto p = parse_poset_spec(s);
        for (Rank r = 0; r < 2000; ++r) ASSERT_EQ(p.rank(p.unrank(r)), r) << s;
    }
    const auto p = parse_poset_spec("prefix:abc");
    const auto all = words_up_to("abc", 4);
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(p.unrank(i), word(all[i]));
}

TEST(Rank, FiniteOutOfRange) {
    const auto p = finite_poset_from_json(nlohmann::json::parse(R"({"elements":["x","y"],"lt":[[0,1]]})"));
    EXPECT_EQ(p.unrank(1), word("y"));
    EXPECT_THROW(p.unrank(2), DomainError);
    EXPECT_TRUE(p.leq(word("x"), word("y")));
}

TEST(OrderLaws, SampledInstances) {
    for (const char* s : {"nat", "int", "prefix:ab", "lexico:a<b", "lexico:a<b;c", "finsets", "rev(lexico:a<b;c)",
                          "discrete(int)"})
        check_order_laws(parse_poset_spec(s), 5000, 10000, 11);
}

TEST(OrderLaws, PartialLexicoExhaustive) {
    // every strict order on up to 3 symbols, words of length <= 4
    const std::vector<std::string> specs{"lexico:a",     "lexico:a;b",       "lexico:a<b",   "lexico:a;b;c",
                                         "lexico:a<b;c", "lexico:a<b;a<c",   "lexico:a<c;b<c", "lexico:a<b<c",
                                         "lexico:b<a;c", "lexico:c<a<b"};
    for (const auto& s : specs) {
        const auto p = parse_poset_spec(s);
        const auto& wm = dynamic_cast<const poset_detail::WordModel&>(p.model());
        const auto words = words_up_to(wm.alphabet(), 4);
        auto sym_lt = [&](char a, char b) { return wm.symbol_lt(a, b); };
        for (const auto& u : words)
            for (const auto& v : words) {
                const bool uv = p.leq(word(u), word(v));
                ASSERT_EQ(uv, lexico_oracle(u, v, sym_lt)) << s << " " << u << " " << v;
                if (uv && u != v) ASSERT_FALSE(p.leq(word(v), word(u)));
            }
        for (const auto& u : words)
            for (const auto& v : words) {
                if (!p.leq(word(u), word(v))) continue;
                for (const auto& w : words)
                    if (p.leq(word(v), word(w))) ASSERT_TRUE(p.leq(word(u), word(w))) << s;
            }
    }
}

TEST(OrderLaws, PrefixImpliesLexico) {
    const auto pre = parse_poset_spec("prefix:ab"), lex = parse_poset_spec("lexico:a<b");
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10000; ++i) {
        const auto u = pre.unrank(rng() % 4000), v = pre.unrank(rng() % 4000);
        if (pre.lt(u, v)) ASSERT_TRUE(lex.lt(u, v));
    }
}

TEST(OrderLaws, DoubleReverse) {
    for (const char* s : {"int", "prefix:ab", "lexico:a<b;c", "finsets"}) {
        const auto p = parse_poset_spec(s);
        const auto rr = p.reversed().reversed();
        std::mt19937_64 rng(5);
        for (int i = 0; i < 10000; ++i) {
            const auto a = p.unrank(rng() % 3000), b = p.unrank(rng() % 3000);
            ASSERT_EQ(p.leq(a, b), rr.leq(a, b));
            ASSERT_EQ(p.leq(a, b), p.reversed().leq(b, a));
        }
    }
}

TEST(Metadata, MinimumIsBelowSampledRanks) {
    for (const char* s : {"nat", "int", "prefix:ab", "lexico:a<b;c", "finsets", "rev(nat)", "discrete(nat)",
                          "rev(prefix:ab)"}) {
        const auto p = parse_poset_spec(s);
        const auto m = p.metadata();
        if (!m.has_minimum) continue;
        ASSERT_TRUE(m.minimum_rank) << s;
        const auto lo = p.unrank(*m.minimum_rank);
        for (Rank r = 0; r < 1000; ++r) ASSERT_TRUE(p.leq(lo, p.unrank(r))) << s;
    }
    EXPECT_TRUE(parse_poset_spec("nat").metadata().has_minimum);
    EXPECT_FALSE(parse_poset_spec("int").metadata().has_minimum);
    EXPECT_FALSE(parse_poset_spec("rev(nat)").metadata().has_minimum);
    EXPECT_FALSE(parse_poset_spec("discrete(nat)").metadata().has_minimum);
}

TEST(Metadata, FinitePoset) {
    const auto p = finite_poset_from_json(
        nlohmann::json::parse(R"({"elements":["a","b","c","d"],"lt":[[0,2],[0,3],[1,2],[1,3]]})"));
    const auto m = p.metadata();
    EXPECT_FALSE(m.has_minimum);
    EXPECT_EQ(m.minimal_elements, (std::vector<Rank>{0, 1}));
    EXPECT_EQ(m.height_bound, 2u);
}

TEST(FinitePosetJson, ClosesAndRejectsCycles) {
    const auto p = finite_poset_from_json(nlohmann::json::parse(R"({"elements":["x","y","z"],"lt":[[0,1],[1,2]]})"));
    EXPECT_TRUE(p.leq(word("x"), word("z")));
    EXPECT_THROW(finite_poset_from_json(nlohmann::json::parse(R"({"elements":["x","y"],"lt":[[0,1],[1,0]]})")),
                 ParseError);
    EXPECT_THROW(finite_poset_from_json(nlohmann::json::parse(R"({"elements":["x"],"lt":[[0,3]]})")), ParseError);
    EXPECT_THROW(finite_poset_from_json(nlohmann::json::parse(R"({"elements":["x","x"],"lt":[]})")), ParseError);
}

TEST(ElementSetCheck, Duplicates) {
    const auto p = parse_poset_spec("nat");
    EXPECT_NO_THROW(check_element_set(p, {integer(1), integer(2)}));
    EXPECT_THROW(check_element_set(p, {integer(1), integer(1)}), DomainError);
}

TEST(FiniteGreatest, Examples) {
    EXPECT_EQ(finite_greatest(parse_poset_spec("nat"), {integer(3), integer(7), integer(5)}), integer(7));
    const auto p = parse_poset_spec("prefix:ab");
    EXPECT_FALSE(finite_greatest(p, {word("a"), word("b")}));
    EXPECT_EQ(finite_greatest(p, {word("a"), word("ab"), word("abb")}), word("abb"));
    EXPECT_FALSE(finite_greatest(p, {}));
}

TEST(EscapeElement, Examples) {
    EXPECT_EQ(escape_element(parse_poset_spec("int"), {integer(0)}, 10), integer(-1));
    EXPECT_FALSE(escape_element(parse_poset_spec("nat"), {integer(0)}, 1000));
    EXPECT_EQ(escape_element(parse_poset_spec("prefix:ab"), {word("a")}, 10), word(""));
}

TEST(ParseElement, Formats) {
    const auto fs = parse_poset_spec("finsets");
    EXPECT_EQ(fs.parse_element("{3,1}"), Element(FinSet::of({1, 3})));
    EXPECT_EQ(fs.format(FinSet::of({1, 3})), "{1,3}");
    EXPECT_EQ(parse_poset_spec("int").parse_element("-4"), integer(-4));
    EXPECT_THROW(parse_poset_spec("nat").parse_element("x"), ParseError);
}
