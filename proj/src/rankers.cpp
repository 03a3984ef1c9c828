#include "termrank/rankers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "termrank/graph_walk.hpp"

namespace termrank {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(line.substr(start));
            break;
        }
        parts.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

// True when pattern occurs as a contiguous run inside the document tokens.
bool contains_subsequence(const std::vector<Token>& tokens,
                          const std::vector<std::string>& pattern) {
    if (pattern.empty() || tokens.size() < pattern.size()) {
        return false;
    }
    for (std::size_t start = 0; start + pattern.size() <= tokens.size(); ++start) {
        bool hit = true;
        for (std::size_t k = 0; k < pattern.size(); ++k) {
            if (tokens[start + k].text != pattern[k]) {
                hit = false;
                break;
            }
        }
        if (hit) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::string to_string(RankerKind kind) {
    switch (kind) {
        case RankerKind::scored_total: return "scored_total";
        case RankerKind::order_only_total: return "order_only_total";
        case RankerKind::order_only_partial: return "order_only_partial";
    }
    return "unknown";
}

std::unordered_map<std::string, int> competition_ranks(
    const std::vector<std::string>& ids, const std::unordered_map<std::string, double>& scores) {
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores.at(ids[a]) > scores.at(ids[b]);
    });
    std::unordered_map<std::string, int> ranks;
    int rank = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && scores.at(ids[order[i]]) < scores.at(ids[order[i - 1]])) {
            rank = static_cast<int>(i) + 1;
        }
        ranks.emplace(ids[order[i]], rank);
    }
    return ranks;
}

RankerOutput scored_output(std::string ranker_id, const std::vector<CandidateTerm>& candidates,
                           std::unordered_map<std::string, double> scores) {
    std::vector<std::string> ids;
    ids.reserve(candidates.size());
    for (const CandidateTerm& term : candidates) {
        ids.push_back(term.term_id);
    }
    RankerOutput out;
    out.ranker_id = std::move(ranker_id);
    out.kind = RankerKind::scored_total;
    out.ranks = competition_ranks(ids, scores);
    out.scores = std::move(scores);
    return out;
}

std::uint32_t CooccurrenceGraph::weight(std::uint32_t a, std::uint32_t b) const {
    if (a == b) {
        return 0;
    }
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = edge_weights.find(key);
    return it == edge_weights.end() ? 0 : it->second;
}

CooccurrenceGraph build_cooccurrence_graph(const Document& doc,
                                           const std::vector<CandidateTerm>& candidates,
                                           int window) {
    if (window < 2) {
        throw Error("co-occurrence window must be >= 2");
    }
    CooccurrenceGraph graph;
    graph.window = window;

    std::vector<bool> covered(doc.tokens.size(), false);
    for (const CandidateTerm& term : candidates) {
        for (const TokenSpan& span : term.occurrences) {
            for (std::size_t i = span.begin; i < span.end && i < covered.size(); ++i) {
                covered[i] = true;
            }
        }
    }

    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::optional<std::uint32_t>> vertex_at(doc.tokens.size());
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (!covered[i]) {
            continue;
        }
        auto [it, inserted] =
            index.try_emplace(doc.tokens[i].text, static_cast<std::uint32_t>(graph.vertices.size()));
        if (inserted) {
            graph.vertices.push_back(doc.tokens[i].text);
        }
        vertex_at[i] = it->second;
    }

    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (!vertex_at[i]) {
            continue;
        }
        const std::size_t limit = std::min(doc.tokens.size(), i + static_cast<std::size_t>(window));
        for (std::size_t j = i + 1; j < limit; ++j) {
            if (!vertex_at[j] || *vertex_at[i] == *vertex_at[j]) {
                continue;
            }
            auto key = *vertex_at[i] < *vertex_at[j] ? std::make_pair(*vertex_at[i], *vertex_at[j])
                                                     : std::make_pair(*vertex_at[j], *vertex_at[i]);
            graph.edge_weights[key] += 1;
        }
    }
    return graph;
}

RankerOutput tfidf_rank(const Document& doc, const std::vector<CandidateTerm>& candidates,
                        const Corpus& corpus) {
    if (corpus.documents.empty()) {
        throw Error("tfidf needs a nonempty corpus");
    }
    bool doc_in_corpus = false;
    for (const Document& d : corpus.documents) {
        if (d.doc_id == doc.doc_id) {
            doc_in_corpus = true;
            break;
        }
    }
    // A document outside the background corpus is counted as an extra
    // corpus member so df >= 1 always holds.
    const double n_docs = static_cast<double>(corpus.size() + (doc_in_corpus ? 0 : 1));

    std::unordered_map<std::string, double> scores;
    for (const CandidateTerm& term : candidates) {
        std::size_t df = doc_in_corpus ? 0 : 1;
        for (const Document& d : corpus.documents) {
            if (contains_subsequence(d.tokens, term.surface_tokens)) {
                ++df;
            }
        }
        if (df == 0) {
            throw ValidationError("candidate \"" + term.term_id +
                                  "\" does not occur in its own document's corpus");
        }
        scores[term.term_id] =
            static_cast<double>(term.tf()) * std::log(n_docs / static_cast<double>(df));
    }
    return scored_output("tfidf", candidates, std::move(scores));
}

RankerOutput singlerank_rank(const Document& doc, const std::vector<CandidateTerm>& candidates,
                             int window, double damping, double tol, int max_iter) {
    if (damping <= 0.0 || damping >= 1.0) {
        throw Error("damping must lie in (0, 1)");
    }
    CooccurrenceGraph cograph = build_cooccurrence_graph(doc, candidates, window);

    std::unordered_map<std::string, double> word_scores;
    if (!cograph.vertices.empty()) {
        WalkGraph walk;
        walk.n = cograph.vertices.size();
        walk.out_edges.resize(walk.n);
        for (const auto& [key, count] : cograph.edge_weights) {
            const double w = static_cast<double>(count);
            walk.out_edges[key.first].emplace_back(key.second, w);
            walk.out_edges[key.second].emplace_back(key.first, w);
        }
        walk.jump.assign(walk.n, 1.0 / static_cast<double>(walk.n));
        std::vector<double> scores = stationary_scores(walk, damping, tol, max_iter);
        for (std::size_t v = 0; v < walk.n; ++v) {
            word_scores[cograph.vertices[v]] = scores[v];
        }
    }

    std::unordered_map<std::string, double> term_scores;
    for (const CandidateTerm& term : candidates) {
        double score = 0.0;
        for (const std::string& word : term.surface_tokens) {
            auto it = word_scores.find(word);
            if (it != word_scores.end()) {
                score += it->second;  // repeated words count with multiplicity
            }
        }
        term_scores[term.term_id] = score;
    }
    return scored_output("singlerank", candidates, std::move(term_scores));
}

RankerOutput topic_coherence_rank(const std::vector<CandidateTerm>& candidates,
                                  const TopicModel& model, const std::vector<double>& theta) {
    if (theta.size() != static_cast<std::size_t>(model.k)) {
        throw Error("theta length does not match topic count");
    }
    std::unordered_map<std::string, double> scores;
    for (const CandidateTerm& term : candidates) {
        double score = 0.0;
        for (const std::string& word : term.surface_tokens) {
            score += model.word_given_doc(word, theta);
        }
        scores[term.term_id] = score;
    }
    return scored_output("topic", candidates, std::move(scores));
}

const std::unordered_map<std::string, double>* ExternalScores::for_doc(
    const std::string& doc_id) const {
    auto it = by_doc.find(per_document ? doc_id : std::string());
    return it == by_doc.end() ? nullptr : &it->second;
}

ExternalScores load_external_scores(const std::filesystem::path& path) {
    ExternalScores result;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> column_count;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(line_no);
        auto cols = split(line, '\t');
        if (cols.size() != 2 && cols.size() != 3) {
            throw ParseError(where + ": expected 2 or 3 tab-separated columns");
        }
        if (!column_count) {
            column_count = cols.size();
            result.per_document = cols.size() == 3;
        } else if (*column_count != cols.size()) {
            throw ParseError(where + ": inconsistent column count");
        }
        const std::string doc_id = cols.size() == 3 ? cols[0] : std::string();
        const std::string& raw_term = cols[cols.size() - 2];
        const std::string& raw_score = cols[cols.size() - 1];
        std::string term_id = join_tokens(tokenize_words(raw_term));
        if (term_id.empty()) {
            throw ParseError(where + ": term has no tokens");
        }
        double score = 0.0;
        try {
            std::size_t used = 0;
            score = std::stod(raw_score, &used);
            if (used != raw_score.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ParseError(where + ": bad score \"" + raw_score + "\"");
        }
        auto [it, inserted] = result.by_doc[doc_id].emplace(term_id, score);
        if (!inserted) {
            throw ValidationError(where + ": duplicate score for term \"" + term_id + "\"");
        }
    }
    return result;
}

RankerOutput external_score_rank(const std::vector<CandidateTerm>& candidates,
                                 const ExternalScores& scores, const std::string& doc_id) {
    const auto* table = scores.for_doc(doc_id);
    std::unordered_map<std::string, double> term_scores;
    std::vector<std::string> missing;
    for (const CandidateTerm& term : candidates) {
        const double* found = nullptr;
        if (table) {
            auto it = table->find(term.term_id);
            if (it != table->end()) {
                found = &it->second;
            }
        }
        if (!found) {
            missing.push_back(term.term_id);
        } else {
            term_scores[term.term_id] = *found;
        }
    }
    if (!missing.empty()) {
        std::string message = "external scores missing for " + std::to_string(missing.size()) +
                              " candidate(s) of " + doc_id + ":";
        for (const std::string& id : missing) {
            message += " \"" + id + "\"";
        }
        throw ValidationError(message);
    }
    return scored_output("external", candidates, std::move(term_scores));
}

RankerOutput unfamiliarity_rank(const std::vector<CandidateTerm>& candidates,
                                const Lexicon& lexicon, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw Error("familiarity threshold must lie in [0, 1]");
    }
    RankerOutput out;
    out.ranker_id = "unfamiliarity";
    out.kind = RankerKind::order_only_partial;

    int unfamiliar = 0;
    for (const CandidateTerm& term : candidates) {
        if (!term.lexicon_index) {
            continue;
        }
        const auto& fam = lexicon.entries()[*term.lexicon_index].familiarity;
        if (fam && *fam <= threshold) {
            ++unfamiliar;
        }
    }
    for (const CandidateTerm& term : candidates) {
        if (!term.lexicon_index) {
            continue;
        }
        const auto& fam = lexicon.entries()[*term.lexicon_index].familiarity;
        if (!fam) {
            continue;
        }
        out.ranks.emplace(term.term_id, *fam <= threshold ? 1 : 1 + unfamiliar);
    }
    return out;
}

RankerOutput semantic_type_rank(const std::vector<CandidateTerm>& candidates,
                                const Lexicon& lexicon,
                                const std::vector<std::string>& preferred_types) {
    if (preferred_types.empty()) {
        throw Error("preferred semantic type set is empty");
    }
    const std::unordered_set<std::string> preferred(preferred_types.begin(),
                                                    preferred_types.end());
    auto is_preferred = [&](const CandidateTerm& term) {
        if (!term.lexicon_index) {
            return false;
        }
        for (const std::string& label : lexicon.entries()[*term.lexicon_index].semantic_types) {
            if (preferred.contains(label)) {
                return true;
            }
        }
        return false;
    };

    int preferred_count = 0;
    for (const CandidateTerm& term : candidates) {
        if (is_preferred(term)) {
            ++preferred_count;
        }
    }
    RankerOutput out;
    out.ranker_id = "semantic_type";
    out.kind = RankerKind::order_only_total;
    for (const CandidateTerm& term : candidates) {
        out.ranks.emplace(term.term_id, is_preferred(term) ? 1 : 1 + preferred_count);
    }
    return out;
}

std::vector<std::string> select_preferred_types(const Lexicon& lexicon) {
    std::map<std::string, std::int64_t> frequency;
    for (const LexiconEntry& entry : lexicon.entries()) {
        if (!entry.vocab_member) {
            continue;
        }
        for (const std::string& label : entry.semantic_types) {
            frequency[label] += 1;
        }
    }
    if (frequency.empty()) {
        throw Error("lexicon has no typed vocab-member entries");
    }

    std::vector<std::pair<std::string, std::int64_t>> ranked(frequency.begin(), frequency.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    std::int64_t total = 0;
    for (const auto& [label, count] : ranked) {
        total += count;
    }

    // Smallest prefix sizes covering more than half of all assignments are
    // candidate cuts; the winner has the largest drop to the next rank.
    std::size_t best_k = 0;
    std::int64_t best_gap = -1;
    std::int64_t cumulative = 0;
    for (std::size_t k = 1; k <= ranked.size(); ++k) {
        cumulative += ranked[k - 1].second;
        if (2 * cumulative <= total) {
            continue;
        }
        const std::int64_t gap =
            k < ranked.size() ? ranked[k - 1].second - ranked[k].second : ranked[k - 1].second;
        if (gap > best_gap) {
            best_gap = gap;
            best_k = k;
        }
    }

    std::vector<std::string> selected;
    selected.reserve(best_k);
    for (std::size_t i = 0; i < best_k; ++i) {
        selected.push_back(ranked[i].first);
    }
    return selected;
}

}  // namespace termrank
