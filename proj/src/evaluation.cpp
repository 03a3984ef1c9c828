#include "termrank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "termrank/corpus.hpp"

namespace termrank {

using nlohmann::json;

std::vector<GoldAnnotation> load_gold(const std::filesystem::path& path) {
    std::vector<GoldAnnotation> golds;
    std::unordered_set<std::string> seen_ids;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(line_no);
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!record.is_object() || !record.contains("doc_id") || !record.contains("gold_terms")) {
            throw ParseError(where + ": expected {\"doc_id\", \"gold_terms\"}");
        }
        GoldAnnotation gold;
        gold.doc_id = record.at("doc_id").get<std::string>();
        if (!seen_ids.insert(gold.doc_id).second) {
            throw ValidationError(where + ": duplicate doc_id " + gold.doc_id);
        }
        std::unordered_set<std::string> seen_terms;
        for (const auto& raw : record.at("gold_terms")) {
            std::vector<std::string> tokens = tokenize_words(raw.get<std::string>());
            if (tokens.empty()) {
                throw ValidationError(where + ": gold term has no tokens");
            }
            if (seen_terms.insert(join_tokens(tokens)).second) {
                gold.gold_terms.push_back(std::move(tokens));
            }
        }
        if (gold.gold_terms.empty()) {
            throw ValidationError(where + ": empty gold term set for " + gold.doc_id);
        }
        golds.push_back(std::move(gold));
    }
    return golds;
}

bool relaxed_match(std::span<const std::string> predicted, std::span<const std::string> gold) {
    if (predicted.empty() || gold.empty() || gold.size() > predicted.size()) {
        return false;
    }
    for (std::size_t start = 0; start + gold.size() <= predicted.size(); ++start) {
        bool hit = true;
        for (std::size_t k = 0; k < gold.size(); ++k) {
            if (predicted[start + k] != gold[k]) {
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

PrfResult prf_at_n(const std::vector<ScoredTerm>& ranked, const GoldAnnotation& gold, int n) {
    if (n < 1) {
        throw Error("n must be >= 1");
    }
    if (gold.gold_terms.empty()) {
        throw Error("empty gold set for " + gold.doc_id + ": recall is undefined");
    }
    std::vector<bool> credited(gold.gold_terms.size(), false);
    int tp = 0;
    const std::size_t limit = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < limit; ++i) {
        for (std::size_t g = 0; g < gold.gold_terms.size(); ++g) {
            if (!credited[g] && relaxed_match(ranked[i].tokens, gold.gold_terms[g])) {
                credited[g] = true;
                ++tp;
                break;  // each prediction credits at most one gold term
            }
        }
    }
    PrfResult result;
    result.true_positives = tp;
    result.precision = static_cast<double>(tp) / static_cast<double>(n);
    result.recall = static_cast<double>(tp) / static_cast<double>(gold.gold_terms.size());
    result.f = (result.precision + result.recall) > 0.0
                   ? 2.0 * result.precision * result.recall / (result.precision + result.recall)
                   : 0.0;
    return result;
}

namespace {

// Rank-sum AUC with 0.5 credit for ties: average ranks over the pooled
// scores, then AUC = (sum of positive ranks - P(P+1)/2) / (P*N).
double rank_sum_auc(const std::vector<double>& positives, const std::vector<double>& negatives) {
    struct Item {
        double score;
        bool positive;
    };
    std::vector<Item> items;
    items.reserve(positives.size() + negatives.size());
    for (double s : positives) {
        items.push_back({s, true});
    }
    for (double s : negatives) {
        items.push_back({s, false});
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.score < b.score; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i;
        while (j < items.size() && items[j].score == items[i].score) {
            ++j;
        }
        const double average_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (items[k].positive) {
                positive_rank_sum += average_rank;
            }
        }
        i = j;
    }
    const double p = static_cast<double>(positives.size());
    const double n = static_cast<double>(negatives.size());
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

}  // namespace

std::optional<double> auc_ranking(const std::vector<ScoredTerm>& ranked,
                                  const GoldAnnotation& gold) {
    std::vector<double> positives;
    std::vector<double> negatives;
    for (const ScoredTerm& term : ranked) {
        bool matched = false;
        for (const auto& gold_term : gold.gold_terms) {
            if (relaxed_match(term.tokens, gold_term)) {
                matched = true;
                break;
            }
        }
        (matched ? positives : negatives).push_back(term.score);
    }
    if (positives.empty() || negatives.empty()) {
        return std::nullopt;
    }
    return rank_sum_auc(positives, negatives);
}

std::optional<double> auc_ke(const std::vector<ScoredTerm>& ranked, const GoldAnnotation& gold) {
    std::vector<double> positives;
    std::vector<double> negatives;
    std::vector<bool> candidate_matched(ranked.size(), false);
    for (std::size_t g = 0; g < gold.gold_terms.size(); ++g) {
        double best = -std::numeric_limits<double>::infinity();
        bool matched = false;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            if (relaxed_match(ranked[i].tokens, gold.gold_terms[g])) {
                candidate_matched[i] = true;
                matched = true;
                best = std::max(best, ranked[i].score);
            }
        }
        // A gold term the extractor missed sits below every candidate and
        // loses all of its pairwise comparisons.
        positives.push_back(matched ? best : -std::numeric_limits<double>::infinity());
    }
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (!candidate_matched[i]) {
            negatives.push_back(ranked[i].score);
        }
    }
    if (positives.empty() || negatives.empty()) {
        return std::nullopt;
    }
    return rank_sum_auc(positives, negatives);
}

EvalReport evaluate_corpus(const std::map<std::string, std::vector<ScoredTerm>>& rankings,
                           const std::vector<GoldAnnotation>& golds, const std::vector<int>& ns,
                           std::vector<std::string>* warnings) {
    if (ns.empty()) {
        throw Error("at least one cutoff n is required");
    }
    EvalReport report;
    report.ns = ns;

    for (const GoldAnnotation& gold : golds) {
        auto it = rankings.find(gold.doc_id);
        if (it == rankings.end()) {
            throw Error("no ranking for annotated document " + gold.doc_id);
        }
        const std::vector<ScoredTerm>& ranked = it->second;

        DocMetrics metrics;
        metrics.doc_id = gold.doc_id;
        metrics.candidates = ranked.size();
        metrics.gold = gold.gold_terms.size();
        for (const auto& gold_term : gold.gold_terms) {
            for (const ScoredTerm& term : ranked) {
                if (relaxed_match(term.tokens, gold_term)) {
                    ++metrics.gold_matched;
                    break;
                }
            }
        }
        for (int n : ns) {
            metrics.prf[n] = prf_at_n(ranked, gold, n);
        }
        metrics.auc_ranking = auc_ranking(ranked, gold);
        metrics.auc_ke = auc_ke(ranked, gold);
        if ((!metrics.auc_ranking || !metrics.auc_ke) && warnings) {
            warnings->push_back("document " + gold.doc_id +
                                " has no positive or no negative candidates; excluded from AUC "
                                "averages");
        }
        report.per_doc.push_back(std::move(metrics));
    }

    const double doc_count = static_cast<double>(report.per_doc.size());
    for (int n : ns) {
        PrfResult macro;
        for (const DocMetrics& metrics : report.per_doc) {
            const PrfResult& prf = metrics.prf.at(n);
            macro.precision += prf.precision;
            macro.recall += prf.recall;
            macro.f += prf.f;
            macro.true_positives += prf.true_positives;
        }
        if (doc_count > 0) {
            macro.precision /= doc_count;
            macro.recall /= doc_count;
            macro.f /= doc_count;
        }
        report.macro_prf[n] = macro;
    }
    double auc_ranking_sum = 0.0;
    double auc_ke_sum = 0.0;
    for (const DocMetrics& metrics : report.per_doc) {
        if (metrics.auc_ranking) {
            auc_ranking_sum += *metrics.auc_ranking;
            ++report.auc_ranking_docs;
        }
        if (metrics.auc_ke) {
            auc_ke_sum += *metrics.auc_ke;
            ++report.auc_ke_docs;
        }
    }
    if (report.auc_ranking_docs > 0) {
        report.macro_auc_ranking = auc_ranking_sum / static_cast<double>(report.auc_ranking_docs);
    }
    if (report.auc_ke_docs > 0) {
        report.macro_auc_ke = auc_ke_sum / static_cast<double>(report.auc_ke_docs);
    }
    return report;
}

namespace {

json prf_to_json(const PrfResult& prf) {
    return json{{"precision", prf.precision},
                {"recall", prf.recall},
                {"f", prf.f},
                {"true_positives", prf.true_positives}};
}

json optional_to_json(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
    json docs = json::array();
    for (const DocMetrics& metrics : report.per_doc) {
        json prf = json::object();
        for (const auto& [n, result] : metrics.prf) {
            prf[std::to_string(n)] = prf_to_json(result);
        }
        docs.push_back(json{{"doc_id", metrics.doc_id},
                            {"prf", prf},
                            {"auc_ranking", optional_to_json(metrics.auc_ranking)},
                            {"auc_ke", optional_to_json(metrics.auc_ke)},
                            {"candidates", metrics.candidates},
                            {"gold", metrics.gold},
                            {"gold_matched", metrics.gold_matched}});
    }
    json macro_prf = json::object();
    for (const auto& [n, result] : report.macro_prf) {
        macro_prf[std::to_string(n)] = prf_to_json(result);
    }
    json out{{"ns", report.ns},
             {"per_document", docs},
             {"macro",
              json{{"prf", macro_prf},
                   {"auc_ranking", optional_to_json(report.macro_auc_ranking)},
                   {"auc_ke", optional_to_json(report.macro_auc_ke)},
                   {"auc_ranking_documents", report.auc_ranking_docs},
                   {"auc_ke_documents", report.auc_ke_docs}}}};
    return out.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
    std::ostringstream out;
    char buf[64];
    auto cell = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%8.3f", v);
        out << buf;
    };
    auto opt_cell = [&](const std::optional<double>& v) {
        if (v) {
            cell(*v);
        } else {
            std::snprintf(buf, sizeof(buf), "%8s", "-");
            out << buf;
        }
    };

    std::snprintf(buf, sizeof(buf), "%-16s", "document");
    out << buf;
    for (int n : report.ns) {
        for (const char* metric : {"P", "R", "F"}) {
            std::snprintf(buf, sizeof(buf), "%7s%d", metric, n);
            out << buf;
        }
    }
    out << "  AUCrank    AUCke\n";

    auto row = [&](const std::string& name, const std::map<int, PrfResult>& prf,
                   const std::optional<double>& auc_rank, const std::optional<double>& auc_ke) {
        std::snprintf(buf, sizeof(buf), "%-16s", name.c_str());
        out << buf;
        for (int n : report.ns) {
            const PrfResult& r = prf.at(n);
            cell(r.precision);
            cell(r.recall);
            cell(r.f);
        }
        opt_cell(auc_rank);
        opt_cell(auc_ke);
        out << '\n';
    };
    for (const DocMetrics& metrics : report.per_doc) {
        row(metrics.doc_id, metrics.prf, metrics.auc_ranking, metrics.auc_ke);
    }
    row("macro", report.macro_prf, report.macro_auc_ranking, report.macro_auc_ke);
    return out.str();
}

}  // namespace termrank
