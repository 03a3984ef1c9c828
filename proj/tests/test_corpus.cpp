#include <doctest.h>

#include <random>

#include "termrank/corpus.hpp"
#include "test_util.hpp"

using namespace termrank;

TEST_SUITE_BEGIN("corpus");

TEST_CASE("tokenize strips punctuation and lowercases") {
    CHECK(tokenize_words("Whipple procedure.") == std::vector<std::string>{"whipple", "procedure"});
}

TEST_CASE("tokenize of empty text is empty") {
    CHECK(tokenize_words("").empty());
}

TEST_CASE("tokenize keeps internal hyphens and apostrophes") {
    CHECK(tokenize_words("non-Hodgkin lymphoma") ==
          std::vector<std::string>{"non-hodgkin", "lymphoma"});
    CHECK(tokenize_words("Crohn's disease") == std::vector<std::string>{"crohn's", "disease"});
    CHECK(tokenize_words("a--b c- 'd") == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("tokenize offsets recover the original surface") {
    const std::string text = "Low-grade  pancreatic neoplasm.";
    const auto tokens = tokenize(text);
    REQUIRE(tokens.size() == 3);
    CHECK(text.substr(tokens[0].begin, tokens[0].end - tokens[0].begin) == "Low-grade");
    CHECK(text.substr(tokens[2].begin, tokens[2].end - tokens[2].begin) == "neoplasm");
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        CHECK(tokens[i - 1].end <= tokens[i].begin);  // non-overlapping, increasing
    }
}

TEST_CASE("load_lexicon parses fields") {
    testutil::TempDir tmp;
    const auto path = tmp.write("lex.tsv",
                                "# comment\n"
                                "pancytopenia\t0.21\tDisease or syndrome\t1\n"
                                "treadmill\t\tManufactured object\t0\n");
    const Lexicon lexicon = load_lexicon(path);
    REQUIRE(lexicon.size() == 2);
    const auto& first = lexicon.entries()[0];
    CHECK(first.term_tokens == std::vector<std::string>{"pancytopenia"});
    CHECK(first.familiarity == 0.21);
    CHECK(first.semantic_types == std::vector<std::string>{"Disease or syndrome"});
    CHECK(first.vocab_member);
    const auto& second = lexicon.entries()[1];
    CHECK_FALSE(second.familiarity.has_value());
    CHECK_FALSE(second.vocab_member);
}

TEST_CASE("load_lexicon rejects duplicates and malformed rows") {
    testutil::TempDir tmp;
    CHECK_THROWS_AS(load_lexicon(tmp.write("dup.tsv", "flu\t0.9\t\t1\nflu\t0.8\t\t1\n")),
                    ValidationError);
    CHECK_THROWS_AS(load_lexicon(tmp.write("cols.tsv", "flu\t0.9\t\n")), ParseError);
    CHECK_THROWS_AS(load_lexicon(tmp.write("fam.tsv", "flu\t1.2\t\t1\n")), ParseError);
    CHECK_THROWS_AS(load_lexicon(tmp.write("fam2.tsv", "flu\tabc\t\t1\n")), ParseError);
    try {
        load_lexicon(tmp.write("line.tsv", "flu\t0.5\t\t1\nbad row\t\t\n"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

namespace {

Lexicon make_lexicon(const std::vector<std::string>& terms) {
    std::vector<LexiconEntry> entries;
    for (const auto& term : terms) {
        LexiconEntry entry;
        entry.term_tokens = tokenize_words(term);
        entries.push_back(std::move(entry));
    }
    return Lexicon(std::move(entries));
}

}  // namespace

TEST_CASE("extract_candidates prefers the longest match") {
    const auto doc = Document::from_text("d", "low grade pancreatic neoplasm");
    const auto lexicon = make_lexicon({"pancreatic neoplasm", "neoplasm"});
    const auto candidates = extract_candidates(doc, lexicon);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].term_id == "pancreatic neoplasm");
}

TEST_CASE("extract_candidates aggregates occurrences of one surface form") {
    std::string text = "insulin";
    for (int i = 0; i < 30; ++i) {
        text += " filler" + std::to_string(i);
    }
    text += " insulin";
    const auto doc = Document::from_text("d", text);
    const auto candidates = extract_candidates(doc, make_lexicon({"insulin"}));
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].tf() == 2);
    CHECK(candidates[0].occurrences.front().begin == 0);
}

TEST_CASE("extract_candidates with no lexicon term in the text") {
    const auto doc = Document::from_text("d", "entirely unrelated words here");
    CHECK(extract_candidates(doc, make_lexicon({"insulin"})).empty());
}

TEST_CASE("extract_candidates is deterministic and spans round-trip") {
    const auto doc = Document::from_text(
        "d", "flu shot then insulin pump and more insulin for the flu season");
    const auto lexicon = make_lexicon({"flu", "insulin", "insulin pump"});
    const auto a = extract_candidates(doc, lexicon);
    const auto b = extract_candidates(doc, lexicon);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].term_id == b[i].term_id);
        CHECK(a[i].occurrences == b[i].occurrences);
        for (const TokenSpan& span : a[i].occurrences) {
            std::vector<std::string> readback;
            for (std::size_t t = span.begin; t < span.end; ++t) {
                readback.push_back(doc.tokens[t].text);
            }
            CHECK(readback == a[i].surface_tokens);
        }
    }
}

TEST_CASE("longest-match dominance on nested terms") {
    // Both the short and long form are in the lexicon; wherever the long
    // form occurs the short one must not be reported.
    const auto doc = Document::from_text(
        "d", "pancreatic neoplasm seen; neoplasm confirmed; pancreatic neoplasm again");
    const auto lexicon = make_lexicon({"neoplasm", "pancreatic neoplasm"});
    const auto candidates = extract_candidates(doc, lexicon);
    REQUIRE(candidates.size() == 2);
    CHECK(candidates[0].term_id == "pancreatic neoplasm");
    CHECK(candidates[0].tf() == 2);
    CHECK(candidates[1].term_id == "neoplasm");
    CHECK(candidates[1].tf() == 1);
}

TEST_CASE("planted terms are fully recovered") {
    std::mt19937_64 rng(7);
    const std::vector<std::string> planted = {"alpha beta", "gamma", "delta epsilon zeta",
                                              "eta", "theta iota"};
    std::string text;
    std::size_t planted_count = 0;
    for (int i = 0; i < 120; ++i) {
        if (rng() % 3 == 0) {
            text += planted[rng() % planted.size()];
            ++planted_count;
        } else {
            text += "filler" + std::to_string(rng() % 50);
        }
        text += " ";
    }
    REQUIRE(planted_count > 0);
    const auto doc = Document::from_text("d", text);
    const auto candidates = extract_candidates(doc, make_lexicon(planted));
    std::size_t recovered = 0;
    for (const auto& candidate : candidates) {
        recovered += candidate.tf();
    }
    CHECK(recovered == planted_count);
}

TEST_CASE("import_candidates reads and validates spans") {
    const auto doc = Document::from_text("d", "a ct of the abdomen and pelvis");
    testutil::TempDir tmp;
    const auto good = tmp.write("good.jsonl", "{\"term\":\"ct of the abdomen\",\"spans\":[[1,5]]}\n");
    const auto candidates = import_candidates(doc, good);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].term_id == "ct of the abdomen");
    CHECK(candidates[0].tf() == 1);

    const auto bad = tmp.write("bad.jsonl", "{\"term\":\"ct of the pelvis\",\"spans\":[[1,5]]}\n");
    CHECK_THROWS_AS(import_candidates(doc, bad), ValidationError);

    const auto empty = tmp.write("empty.jsonl", "");
    CHECK(import_candidates(doc, empty).empty());
}

TEST_CASE("candidates_to_jsonl round-trips through import_candidates") {
    const auto doc = Document::from_text(
        "d", "flu shot then insulin pump and more insulin for the flu season");
    const auto lexicon = make_lexicon({"flu", "insulin", "insulin pump"});
    const auto extracted = extract_candidates(doc, lexicon);
    testutil::TempDir tmp;
    const auto path = tmp.write("c.jsonl", candidates_to_jsonl(extracted));
    const auto imported = import_candidates(doc, path);
    REQUIRE(imported.size() == extracted.size());
    for (std::size_t i = 0; i < imported.size(); ++i) {
        CHECK(imported[i].term_id == extracted[i].term_id);
        CHECK(imported[i].occurrences == extracted[i].occurrences);
    }
}

TEST_CASE("load_corpus parses JSONL and rejects duplicate ids") {
    testutil::TempDir tmp;
    const auto path = tmp.write("corpus.jsonl",
                                "{\"doc_id\": \"a\", \"text\": \"one two\"}\n"
                                "{\"doc_id\": \"b\", \"text\": \"three\"}\n");
    const Corpus corpus = load_corpus(path);
    REQUIRE(corpus.size() == 2);
    CHECK(corpus.documents[0].tokens.size() == 2);

    const auto dup = tmp.write("dup.jsonl",
                               "{\"doc_id\": \"a\", \"text\": \"x\"}\n"
                               "{\"doc_id\": \"a\", \"text\": \"y\"}\n");
    CHECK_THROWS_AS(load_corpus(dup), ValidationError);
}

TEST_SUITE_END();
