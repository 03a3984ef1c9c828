#include <doctest.h>

#include <cmath>
#include <random>
#include <unordered_map>

#include "termrank/topic_model.hpp"
#include "test_util.hpp"

using namespace termrank;

TEST_SUITE_BEGIN("topic_model");

namespace {

Corpus corpus_from_texts(const std::vector<std::string>& texts) {
    Corpus corpus;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        corpus.documents.push_back(Document::from_text("doc" + std::to_string(i), texts[i]));
    }
    return corpus;
}

// Two disjoint vocabularies; every document draws from exactly one.
Corpus disjoint_corpus(int docs, int words_per_doc, std::mt19937_64& rng) {
    std::vector<std::string> texts;
    std::uniform_int_distribution<int> word(0, 24);
    for (int d = 0; d < docs; ++d) {
        const char group = d % 2 == 0 ? 'a' : 'b';
        std::string text;
        for (int w = 0; w < words_per_doc; ++w) {
            text += group;
            text += std::to_string(word(rng));
            text += ' ';
        }
        texts.push_back(text);
    }
    return corpus_from_texts(texts);
}

// Fraction of each topic's top-10 words drawn from its majority vocabulary.
double topic_purity(const TopicModel& model) {
    double worst = 1.0;
    for (int t = 0; t < model.k; ++t) {
        std::vector<std::size_t> order(model.vocabulary.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return model.phi[t][a] > model.phi[t][b];
        });
        int a_count = 0;
        const int top = std::min<std::size_t>(10, order.size());
        for (int i = 0; i < top; ++i) {
            if (model.vocabulary[order[i]][0] == 'a') {
                ++a_count;
            }
        }
        const double purity = std::max(a_count, top - a_count) / static_cast<double>(top);
        worst = std::min(worst, purity);
    }
    return worst;
}

}  // namespace

TEST_CASE("k=1 reduces to the smoothed unigram distribution") {
    const Corpus corpus = corpus_from_texts({"apple banana apple", "banana cherry"});
    const double beta = 0.01;
    const TopicModel model = train_lda(corpus, 1, 0.5, beta, 10, 42);
    REQUIRE(model.k == 1);

    // Independent count-based expectation.
    std::unordered_map<std::string, int> counts;
    int total = 0;
    for (const Document& doc : corpus.documents) {
        for (const Token& token : doc.tokens) {
            counts[token.text] += 1;
            ++total;
        }
    }
    const double v = static_cast<double>(model.vocabulary.size());
    for (std::size_t w = 0; w < model.vocabulary.size(); ++w) {
        const double expected = (counts[model.vocabulary[w]] + beta) / (total + v * beta);
        CHECK(model.phi[0][w] == expected);
    }
}

TEST_CASE("training separates disjoint vocabularies") {
    std::mt19937_64 rng(11);
    const Corpus corpus = disjoint_corpus(40, 30, rng);
    const TopicModel model = train_lda(corpus, 2, 0.1, 0.01, 300, 7);
    CHECK(topic_purity(model) >= 0.9);
}

TEST_CASE("training is deterministic for a fixed seed") {
    const Corpus corpus = corpus_from_texts(
        {"apple banana apple cherry", "banana cherry date", "apple date date banana"});
    const TopicModel a = train_lda(corpus, 3, 0.5, 0.01, 50, 99);
    const TopicModel b = train_lda(corpus, 3, 0.5, 0.01, 50, 99);
    CHECK(a.phi == b.phi);
    const TopicModel c = train_lda(corpus, 3, 0.5, 0.01, 50, 100);
    CHECK(a.phi != c.phi);  // different seed, different chain
}

TEST_CASE("phi rows and inferred thetas are probability distributions") {
    const Corpus corpus = corpus_from_texts(
        {"apple banana apple cherry", "banana cherry date", "apple date date banana"});
    const TopicModel model = train_lda(corpus, 4, 0.3, 0.02, 60, 5);
    for (const auto& row : model.phi) {
        double sum = 0.0;
        for (double p : row) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    const auto theta = infer_doc_topics(model, corpus.documents[0], 50, 3).theta;
    double sum = 0.0;
    for (double p : theta) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("k=1 inference is the point distribution") {
    const Corpus corpus = corpus_from_texts({"apple banana"});
    const TopicModel model = train_lda(corpus, 1, 0.5, 0.01, 5, 1);
    const auto theta = infer_doc_topics(model, corpus.documents[0], 10, 1).theta;
    REQUIRE(theta.size() == 1);
    CHECK(theta[0] == 1.0);
}

TEST_CASE("fold-in puts held-out pure documents on the right topic") {
    std::mt19937_64 rng(21);
    const Corpus corpus = disjoint_corpus(40, 30, rng);
    const TopicModel model = train_lda(corpus, 2, 0.1, 0.01, 300, 7);

    const auto held_out = Document::from_text("held", "a1 a2 a3 a4 a5 a1 a2 a3 a4 a5");
    const auto theta = infer_doc_topics(model, held_out, 100, 13).theta;
    // Identify the a-topic by phi mass on a-words.
    double a_mass_0 = 0.0;
    for (std::size_t w = 0; w < model.vocabulary.size(); ++w) {
        if (model.vocabulary[w][0] == 'a') {
            a_mass_0 += model.phi[0][w];
        }
    }
    const int a_topic = a_mass_0 > 0.5 ? 0 : 1;
    CHECK(theta[a_topic] >= 0.9);
}

TEST_CASE("documents with no in-vocabulary tokens get the uniform theta") {
    const Corpus corpus = corpus_from_texts({"apple banana cherry"});
    const TopicModel model = train_lda(corpus, 4, 0.5, 0.01, 5, 1);
    const auto doc = Document::from_text("oov", "zzz qqq");
    const auto theta = infer_doc_topics(model, doc, 10, 1).theta;
    for (double p : theta) {
        CHECK(p == 0.25);
    }
}

TEST_CASE("stopwords are excluded from training but empty corpora fail") {
    const Corpus stopword_only = corpus_from_texts({"the and of to"});
    CHECK_THROWS_AS(train_lda(stopword_only, 2, 0.5, 0.01, 5, 1), Error);

    const Corpus mixed = corpus_from_texts({"the insulin of diabetes"});
    const TopicModel model = train_lda(mixed, 1, 0.5, 0.01, 5, 1);
    CHECK(model.vocabulary == std::vector<std::string>{"insulin", "diabetes"});
}

TEST_CASE("model persistence round-trips and validates") {
    testutil::TempDir tmp;
    const Corpus corpus = corpus_from_texts({"apple banana apple cherry", "banana cherry date"});
    const TopicModel model = train_lda(corpus, 2, 0.5, 0.01, 30, 3);
    {
        const auto path = tmp.path / "model.json";
        save_topic_model(model, path);
        const TopicModel loaded = load_topic_model(path);
        CHECK(loaded.k == model.k);
        CHECK(loaded.phi == model.phi);
        CHECK(loaded.vocabulary == model.vocabulary);
    }
    // Injected doc_topics survive the round trip.
    TopicModel with_theta = model;
    with_theta.doc_topics["doc0"] = {0.25, 0.75};
    const auto path = tmp.path / "model2.json";
    save_topic_model(with_theta, path);
    const TopicModel loaded = load_topic_model(path);
    REQUIRE(loaded.doc_topics.count("doc0") == 1);
    CHECK(loaded.doc_topics.at("doc0") == std::vector<double>{0.25, 0.75});

    // A phi row that does not sum to 1 is rejected.
    const auto bad = tmp.write("bad.json", R"({"k":1,"alpha":0.5,"beta":0.01,
        "vocabulary":["a"],"phi":[[0.5]]})");
    CHECK_THROWS_AS(load_topic_model(bad), ValidationError);
}

TEST_SUITE_END();
