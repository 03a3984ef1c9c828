#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "termrank/corpus.hpp"

namespace termrank {

/// Latent topic model: K topics over an indexed vocabulary, with the
/// word-given-topic matrix estimated by collapsed Gibbs sampling.
struct TopicModel {
    int k = 0;
    double alpha = 0.0;  // symmetric document-topic prior
    double beta = 0.0;   // symmetric topic-word prior
    std::uint64_t seed = 0;
    std::vector<std::string> vocabulary;         // word index -> word
    std::vector<std::vector<double>> phi;        // k x V, rows sum to 1
    /// Optional externally supplied per-document topic distributions,
    /// consulted before fold-in inference.
    std::unordered_map<std::string, std::vector<double>> doc_topics;

    std::unordered_map<std::string, std::uint32_t> vocab_index;  // rebuilt on load

    double word_given_doc(const std::string& word, const std::vector<double>& theta) const;
};

struct DocTopicDistribution {
    std::string doc_id;
    std::vector<double> theta;  // length k, sums to 1
};

/// Words excluded from topic training (not from candidate extraction).
const std::vector<std::string>& topic_stopwords();

/// Trains by collapsed Gibbs sampling for `iterations` full sweeps over the
/// corpus tokens (stopwords removed). phi is estimated from the final
/// assignment counts with beta smoothing. Deterministic for a fixed seed.
TopicModel train_lda(const Corpus& corpus, int k, double alpha, double beta, int iterations,
                     std::uint64_t seed);

/// Fold-in Gibbs sampling of one document's token-topic assignments with
/// phi held fixed; theta comes from the final counts with alpha smoothing.
/// A document with no in-vocabulary tokens gets the uniform distribution.
DocTopicDistribution infer_doc_topics(const TopicModel& model, const Document& doc,
                                      int iterations, std::uint64_t seed);

/// JSON persistence. The schema also accepts externally computed phi (and
/// optional per-document thetas) so other tools' output can be injected.
void save_topic_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_topic_model(const std::filesystem::path& path);

}  // namespace termrank
