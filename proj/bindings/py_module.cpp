#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "termrank/corpus.hpp"
#include "termrank/evaluation.hpp"
#include "termrank/fusion.hpp"
#include "termrank/graph_walk.hpp"
#include "termrank/rankers.hpp"
#include "termrank/topic_model.hpp"

namespace py = pybind11;
using namespace termrank;

namespace {

RankerOutput make_scored_ranker(std::string ranker_id,
                                const std::map<std::string, double>& scores) {
    std::vector<std::string> ids;
    std::unordered_map<std::string, double> score_map;
    for (const auto& [id, score] : scores) {
        ids.push_back(id);
        score_map.emplace(id, score);
    }
    RankerOutput out;
    out.ranker_id = std::move(ranker_id);
    out.kind = RankerKind::scored_total;
    out.ranks = competition_ranks(ids, score_map);
    out.scores = std::move(score_map);
    return out;
}

RankerOutput make_order_ranker(std::string ranker_id, const std::map<std::string, int>& ranks,
                               bool partial) {
    RankerOutput out;
    out.ranker_id = std::move(ranker_id);
    out.kind = partial ? RankerKind::order_only_partial : RankerKind::order_only_total;
    for (const auto& [id, rank] : ranks) {
        out.ranks.emplace(id, rank);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(termrank, m) {
    m.doc() = "Per-document term importance ranking with random-walk rank fusion";

    py::register_exception<Error>(m, "TermrankError", PyExc_RuntimeError);

    py::class_<Token>(m, "Token")
        .def_readonly("text", &Token::text)
        .def_readonly("begin", &Token::begin)
        .def_readonly("end", &Token::end)
        .def("__repr__", [](const Token& t) { return "Token(" + t.text + ")"; });

    py::class_<Document>(m, "Document")
        .def(py::init([](std::string doc_id, std::string text) {
                 return Document::from_text(std::move(doc_id), std::move(text));
             }),
             py::arg("doc_id"), py::arg("text"))
        .def_readonly("doc_id", &Document::doc_id)
        .def_readonly("text", &Document::text)
        .def_readonly("tokens", &Document::tokens);

    py::class_<Corpus>(m, "Corpus")
        .def(py::init([](const std::vector<Document>& docs) {
                 Corpus corpus;
                 corpus.documents = docs;
                 return corpus;
             }),
             py::arg("documents"))
        .def_readonly("documents", &Corpus::documents)
        .def("__len__", &Corpus::size);

    py::class_<LexiconEntry>(m, "LexiconEntry")
        .def_readonly("term_tokens", &LexiconEntry::term_tokens)
        .def_readonly("familiarity", &LexiconEntry::familiarity)
        .def_readonly("semantic_types", &LexiconEntry::semantic_types)
        .def_readonly("vocab_member", &LexiconEntry::vocab_member);

    py::class_<Lexicon>(m, "Lexicon")
        .def("__len__", &Lexicon::size)
        .def_property_readonly("entries", &Lexicon::entries);

    py::class_<TokenSpan>(m, "TokenSpan")
        .def_readonly("begin", &TokenSpan::begin)
        .def_readonly("end", &TokenSpan::end);

    py::class_<CandidateTerm>(m, "CandidateTerm")
        .def_readonly("term_id", &CandidateTerm::term_id)
        .def_readonly("surface_tokens", &CandidateTerm::surface_tokens)
        .def_readonly("occurrences", &CandidateTerm::occurrences)
        .def_property_readonly("tf", &CandidateTerm::tf)
        .def("__repr__",
             [](const CandidateTerm& t) { return "CandidateTerm(" + t.term_id + ")"; });

    py::class_<RankerOutput>(m, "RankerOutput")
        .def_readonly("ranker_id", &RankerOutput::ranker_id)
        .def_property_readonly("kind",
                               [](const RankerOutput& r) { return to_string(r.kind); })
        .def_readonly("scores", &RankerOutput::scores)
        .def_readonly("ranks", &RankerOutput::ranks);

    py::class_<FusedRanking>(m, "FusedRanking")
        .def_readonly("method", &FusedRanking::method)
        .def_readonly("entries", &FusedRanking::entries)
        .def_readonly("ranks", &FusedRanking::ranks)
        .def_readonly("param", &FusedRanking::param);

    py::class_<TopicModel>(m, "TopicModel")
        .def_readonly("k", &TopicModel::k)
        .def_readonly("alpha", &TopicModel::alpha)
        .def_readonly("beta", &TopicModel::beta)
        .def_readonly("vocabulary", &TopicModel::vocabulary)
        .def_readonly("phi", &TopicModel::phi);

    m.def(
        "tokenize", [](const std::string& text) { return tokenize_words(text); },
        py::arg("text"), "Lowercased word tokens of a text.");
    m.def("tokenize_with_offsets", [](const std::string& text) { return tokenize(text); },
          py::arg("text"));
    m.def("load_corpus", &load_corpus, py::arg("path"));
    m.def("load_lexicon", &load_lexicon, py::arg("path"));
    m.def("extract_candidates", &extract_candidates, py::arg("doc"), py::arg("lexicon"));
    m.def("import_candidates", &import_candidates, py::arg("doc"), py::arg("path"));

    m.def("tfidf_rank", &tfidf_rank, py::arg("doc"), py::arg("candidates"), py::arg("corpus"));
    m.def("singlerank_rank", &singlerank_rank, py::arg("doc"), py::arg("candidates"),
          py::arg("window") = 10, py::arg("damping") = 0.85, py::arg("tol") = 1e-9,
          py::arg("max_iter") = 1000);
    m.def("topic_coherence_rank", &topic_coherence_rank, py::arg("candidates"), py::arg("model"),
          py::arg("theta"));
    m.def("unfamiliarity_rank", &unfamiliarity_rank, py::arg("candidates"), py::arg("lexicon"),
          py::arg("threshold") = 0.6);
    m.def("semantic_type_rank", &semantic_type_rank, py::arg("candidates"), py::arg("lexicon"),
          py::arg("preferred_types"));
    m.def("select_preferred_types", &select_preferred_types, py::arg("lexicon"));

    m.def("scored_ranker", &make_scored_ranker, py::arg("ranker_id"), py::arg("scores"),
          "Builds a scored view from a term -> score mapping.");
    m.def("order_ranker", &make_order_ranker, py::arg("ranker_id"), py::arg("ranks"),
          py::arg("partial") = false, "Builds an order-only view from a term -> rank mapping.");

    m.def(
        "fit_rank",
        [](const std::vector<std::string>& terms, const std::vector<RankerOutput>& rankers,
           double d, double tol, int max_iter, bool uniform_jump) {
            FitOptions options;
            options.d = d;
            options.tol = tol;
            options.max_iter = max_iter;
            options.uniform_jump = uniform_jump;
            return fit_rank(terms, rankers, options);
        },
        py::arg("terms"), py::arg("rankers"), py::arg("d") = 0.5, py::arg("tol") = 1e-9,
        py::arg("max_iter") = 1000, py::arg("uniform_jump") = false);
    m.def("combsum_rank", &combsum_rank, py::arg("terms"), py::arg("rankers"));
    m.def("condorcet_rank", &condorcet_rank, py::arg("terms"), py::arg("rankers"));
    m.def("rrf_rank", &rrf_rank, py::arg("terms"), py::arg("rankers"), py::arg("k") = 60.0);
    m.def("rank_relation", &rank_relation, py::arg("a"), py::arg("b"), py::arg("rankers"));
    m.def("edge_weight", &edge_weight, py::arg("a"), py::arg("b"), py::arg("rankers"));
    m.def("jump_distribution", &jump_distribution, py::arg("terms"), py::arg("rankers"));

    m.def(
        "stationary_scores",
        [](std::size_t n,
           const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges,
           const std::vector<double>& jump, double damping, double tol, int max_iter) {
            WalkGraph graph;
            graph.n = n;
            graph.out_edges.resize(n);
            for (const auto& [from, to, weight] : edges) {
                graph.out_edges.at(from).emplace_back(to, weight);
            }
            graph.jump = jump;
            return stationary_scores(graph, damping, tol, max_iter);
        },
        py::arg("n"), py::arg("edges"), py::arg("jump"), py::arg("damping"),
        py::arg("tol") = 1e-9, py::arg("max_iter") = 1000);

    m.def("train_lda", &train_lda, py::arg("corpus"), py::arg("k"), py::arg("alpha"),
          py::arg("beta"), py::arg("iterations"), py::arg("seed"));
    m.def(
        "infer_doc_topics",
        [](const TopicModel& model, const Document& doc, int iterations, std::uint64_t seed) {
            return infer_doc_topics(model, doc, iterations, seed).theta;
        },
        py::arg("model"), py::arg("doc"), py::arg("iterations") = 100, py::arg("seed") = 1);

    m.def(
        "relaxed_match",
        [](const std::string& predicted, const std::string& gold) {
            const auto p = tokenize_words(predicted);
            const auto g = tokenize_words(gold);
            return relaxed_match(p, g);
        },
        py::arg("predicted"), py::arg("gold"),
        "True when the prediction equals or subsumes the gold term.");
}
