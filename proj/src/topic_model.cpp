#include "termrank/topic_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace termrank {

using nlohmann::json;

const std::vector<std::string>& topic_stopwords() {
    static const std::vector<std::string> words = {
        "a",    "an",   "and",  "are",   "as",    "at",    "be",   "been",  "but",  "by",
        "for",  "from", "had",  "has",   "have",  "he",    "her",  "his",   "if",   "in",
        "into", "is",   "it",   "its",   "no",    "not",   "of",   "on",    "or",   "our",
        "s",    "she",  "so",   "that",  "the",   "their", "them", "then",  "there", "these",
        "they", "this", "to",   "was",   "we",    "were",  "which", "while", "who",  "will",
        "with", "you",  "your"};
    return words;
}

namespace {

bool is_stopword(const std::string& word) {
    const auto& words = topic_stopwords();
    return std::binary_search(words.begin(), words.end(), word);
}

// Draws an index from unnormalized weights using one uniform variate.
int draw(const std::vector<double>& weights, double total, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.0, total);
    double point = uniform(rng);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        cumulative += weights[k];
        if (point < cumulative) {
            return static_cast<int>(k);
        }
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace

double TopicModel::word_given_doc(const std::string& word,
                                  const std::vector<double>& theta) const {
    auto it = vocab_index.find(word);
    if (it == vocab_index.end()) {
        return 0.0;
    }
    double p = 0.0;
    for (int topic = 0; topic < k; ++topic) {
        p += phi[topic][it->second] * theta[topic];
    }
    return p;
}

TopicModel train_lda(const Corpus& corpus, int k, double alpha, double beta, int iterations,
                     std::uint64_t seed) {
    if (k < 1) {
        throw Error("topic count must be >= 1");
    }
    if (alpha <= 0.0 || beta <= 0.0) {
        throw Error("alpha and beta must be positive");
    }
    if (iterations < 1) {
        throw Error("iterations must be >= 1");
    }

    TopicModel model;
    model.k = k;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = seed;

    // Vocabulary in first-appearance order, stopwords removed.
    std::vector<std::vector<std::uint32_t>> docs;  // word indices per document
    for (const Document& doc : corpus.documents) {
        std::vector<std::uint32_t> words;
        for (const Token& token : doc.tokens) {
            if (is_stopword(token.text)) {
                continue;
            }
            auto [it, inserted] = model.vocab_index.try_emplace(
                token.text, static_cast<std::uint32_t>(model.vocabulary.size()));
            if (inserted) {
                model.vocabulary.push_back(token.text);
            }
            words.push_back(it->second);
        }
        docs.push_back(std::move(words));
    }
    const std::size_t v = model.vocabulary.size();
    if (v == 0) {
        throw Error("no trainable vocabulary after stopword removal");
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> topic_dist(0, k - 1);

    std::vector<std::vector<int>> assignments(docs.size());
    std::vector<std::vector<std::int64_t>> topic_word(k, std::vector<std::int64_t>(v, 0));
    std::vector<std::int64_t> topic_total(k, 0);
    std::vector<std::vector<std::int64_t>> doc_topic(docs.size(), std::vector<std::int64_t>(k, 0));

    for (std::size_t d = 0; d < docs.size(); ++d) {
        assignments[d].resize(docs[d].size());
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            int topic = topic_dist(rng);
            assignments[d][i] = topic;
            topic_word[topic][docs[d][i]] += 1;
            topic_total[topic] += 1;
            doc_topic[d][topic] += 1;
        }
    }

    std::vector<double> weights(k, 0.0);
    const double v_beta = static_cast<double>(v) * beta;
    for (int sweep = 0; sweep < iterations; ++sweep) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t i = 0; i < docs[d].size(); ++i) {
                const std::uint32_t word = docs[d][i];
                const int old_topic = assignments[d][i];
                topic_word[old_topic][word] -= 1;
                topic_total[old_topic] -= 1;
                doc_topic[d][old_topic] -= 1;

                double total = 0.0;
                for (int t = 0; t < k; ++t) {
                    weights[t] = (static_cast<double>(doc_topic[d][t]) + alpha) *
                                 (static_cast<double>(topic_word[t][word]) + beta) /
                                 (static_cast<double>(topic_total[t]) + v_beta);
                    total += weights[t];
                }
                int new_topic = draw(weights, total, rng);
                assignments[d][i] = new_topic;
                topic_word[new_topic][word] += 1;
                topic_total[new_topic] += 1;
                doc_topic[d][new_topic] += 1;
            }
        }
    }

    model.phi.assign(k, std::vector<double>(v, 0.0));
    for (int t = 0; t < k; ++t) {
        const double denom = static_cast<double>(topic_total[t]) + v_beta;
        for (std::size_t w = 0; w < v; ++w) {
            model.phi[t][w] = (static_cast<double>(topic_word[t][w]) + beta) / denom;
        }
    }
    return model;
}

DocTopicDistribution infer_doc_topics(const TopicModel& model, const Document& doc,
                                      int iterations, std::uint64_t seed) {
    if (iterations < 1) {
        throw Error("iterations must be >= 1");
    }
    DocTopicDistribution result;
    result.doc_id = doc.doc_id;
    const int k = model.k;

    std::vector<std::uint32_t> words;
    for (const Token& token : doc.tokens) {
        auto it = model.vocab_index.find(token.text);
        if (it != model.vocab_index.end()) {
            words.push_back(it->second);
        }
    }
    if (words.empty()) {
        result.theta.assign(k, 1.0 / static_cast<double>(k));
        return result;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> topic_dist(0, k - 1);
    std::vector<int> assignments(words.size());
    std::vector<std::int64_t> counts(k, 0);
    for (std::size_t i = 0; i < words.size(); ++i) {
        assignments[i] = topic_dist(rng);
        counts[assignments[i]] += 1;
    }

    std::vector<double> weights(k, 0.0);
    for (int sweep = 0; sweep < iterations; ++sweep) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            const int old_topic = assignments[i];
            counts[old_topic] -= 1;
            double total = 0.0;
            for (int t = 0; t < k; ++t) {
                weights[t] = (static_cast<double>(counts[t]) + model.alpha) *
                             model.phi[t][words[i]];
                total += weights[t];
            }
            int new_topic = total > 0.0 ? draw(weights, total, rng) : old_topic;
            assignments[i] = new_topic;
            counts[new_topic] += 1;
        }
    }

    const double denom =
        static_cast<double>(words.size()) + static_cast<double>(k) * model.alpha;
    result.theta.resize(k);
    for (int t = 0; t < k; ++t) {
        result.theta[t] = (static_cast<double>(counts[t]) + model.alpha) / denom;
    }
    return result;
}

void save_topic_model(const TopicModel& model, const std::filesystem::path& path) {
    json out{{"k", model.k},
             {"alpha", model.alpha},
             {"beta", model.beta},
             {"seed", model.seed},
             {"vocabulary", model.vocabulary},
             {"phi", model.phi}};
    if (!model.doc_topics.empty()) {
        json topics = json::object();
        for (const auto& [doc_id, theta] : model.doc_topics) {
            topics[doc_id] = theta;
        }
        out["doc_topics"] = topics;
    }
    write_file_atomic(path, out.dump(2) + "\n");
}

TopicModel load_topic_model(const std::filesystem::path& path) {
    json in;
    try {
        in = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    TopicModel model;
    try {
        model.k = in.at("k").get<int>();
        model.alpha = in.at("alpha").get<double>();
        model.beta = in.at("beta").get<double>();
        model.seed = in.value("seed", std::uint64_t{0});
        model.vocabulary = in.at("vocabulary").get<std::vector<std::string>>();
        model.phi = in.at("phi").get<std::vector<std::vector<double>>>();
        if (in.contains("doc_topics")) {
            for (const auto& [doc_id, theta] : in.at("doc_topics").items()) {
                model.doc_topics[doc_id] = theta.get<std::vector<double>>();
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (model.k < 1 || model.phi.size() != static_cast<std::size_t>(model.k)) {
        throw ValidationError(path.string() + ": phi row count does not match k");
    }
    for (const auto& row : model.phi) {
        if (row.size() != model.vocabulary.size()) {
            throw ValidationError(path.string() + ": phi column count does not match vocabulary");
        }
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0) {
                throw ValidationError(path.string() + ": phi entries must be nonnegative");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ValidationError(path.string() + ": phi row does not sum to 1");
        }
    }
    for (const auto& [doc_id, theta] : model.doc_topics) {
        if (theta.size() != static_cast<std::size_t>(model.k)) {
            throw ValidationError(path.string() + ": doc_topics length mismatch for " + doc_id);
        }
    }
    for (std::uint32_t i = 0; i < model.vocabulary.size(); ++i) {
        if (!model.vocab_index.emplace(model.vocabulary[i], i).second) {
            throw ValidationError(path.string() + ": duplicate vocabulary word " +
                                  model.vocabulary[i]);
        }
    }
    return model;
}

}  // namespace termrank
